#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rpqvir {

// Every domain error carries a stable kind tag so reports and the CLI can
// emit structured messages without string-matching on what().
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define RPQVIR_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

RPQVIR_DEFINE_ERROR(DivisionByZero);
RPQVIR_DEFINE_ERROR(EvaluationAtPole);
RPQVIR_DEFINE_ERROR(ContextMismatch);
RPQVIR_DEFINE_ERROR(MissingTauFactorization);
RPQVIR_DEFINE_ERROR(NegativeIndex);
RPQVIR_DEFINE_ERROR(IndexOutOfRange);
RPQVIR_DEFINE_ERROR(UnknownPreset);
RPQVIR_DEFINE_ERROR(InvalidDeformation);
RPQVIR_DEFINE_ERROR(DegenerateWeights);
RPQVIR_DEFINE_ERROR(SingularPrefactor);
RPQVIR_DEFINE_ERROR(MixedParity);
RPQVIR_DEFINE_ERROR(UnsupportedArity);
RPQVIR_DEFINE_ERROR(TruncationExceeded);
RPQVIR_DEFINE_ERROR(ConfigError);

#undef RPQVIR_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error("ParseError", what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace rpqvir
