#pragma once

#include <stdexcept>
#include <string>

namespace symconv {

enum class ErrorCode {
  NotAnInvolution,
  RootSetNotSigmaStable,
  BadMultiplicity,
  ClosureTooLarge,
  MissingMultiplicity,
  NoSimpleRootFound,
  ZeroRoot,
  NotQExtreme,
  NotRegular,
  NotALocalMin,
  SingularInput,
  IllConditioned,
  NotUnipotent,
  NotInNP,
  NotInPH,
  ConfigError,
  RealizationError,
  IoError,
  InvalidArgument,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace symconv
