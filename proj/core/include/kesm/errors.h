#pragma once

#include <stdexcept>
#include <string>

namespace kesm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or a violated precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A record that does not match its file schema.
class FormatError : public ValidationError {
 public:
  FormatError(const std::string& source, const std::string& record_id,
              const std::string& field, const std::string& what)
      : ValidationError(source + ": record '" + record_id + "', field '" + field +
                        "': " + what),
        record_id_(record_id),
        field_(field) {}

  const std::string& record_id() const { return record_id_; }
  const std::string& field() const { return field_; }

 private:
  std::string record_id_;
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kesm
