#pragma once

#include <stdexcept>
#include <string>

namespace domcheck {

class FrontendError : public std::runtime_error {
 public:
  enum class Kind {
    Syntax,
    UnsupportedConstruct,
    Recursion,
    UndefinedFunction,
    UndeclaredVariable,
  };

  FrontendError(Kind kind, int line, int col, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& message() const { return message_; }

 private:
  Kind kind_;
  int line_;
  int col_;
  std::string message_;
};

const char* to_string(FrontendError::Kind kind);

}  // namespace domcheck
