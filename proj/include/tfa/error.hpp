#pragma once

#include <stdexcept>
#include <string>

namespace tfa {

enum class ErrorKind {
  domain,
  non_invertible_metric,
  degenerate_plane,
  zero_field,
  degenerate_fit,
  degenerate_immersion,
  vanishing_tangential,
  ruled_regime,
  dimension,
  blow_up,
  numerical,
  invalid_input,
  unknown_name,
  parse,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace tfa
