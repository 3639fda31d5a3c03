#pragma once

#include <stdexcept>
#include <string>

namespace mqg {

/// Validation failure with a machine-readable kind and the offending elements
/// spelled out in the message.
class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

namespace errkind {
inline constexpr const char* MissingComposite = "MissingComposite";
inline constexpr const char* AssocViolation = "AssocViolation";
inline constexpr const char* BadInverse = "BadInverse";
inline constexpr const char* SupportMismatch = "SupportMismatch";
inline constexpr const char* FibrationMismatch = "FibrationMismatch";
inline constexpr const char* IntersectionTooLarge = "IntersectionTooLarge";
inline constexpr const char* NotFactorizable = "NotFactorizable";
inline constexpr const char* SubgroupoidNotClosed = "SubgroupoidNotClosed";
inline constexpr const char* HaarFail = "HaarFail";
inline constexpr const char* DecompositionFail = "DecompositionFail";
inline constexpr const char* NotFiberConstant = "NotFiberConstant";
inline constexpr const char* ThetaNotBijective = "ThetaNotBijective";
inline constexpr const char* LegMismatch = "LegMismatch";
inline constexpr const char* UnknownMapCombination = "UnknownMapCombination";
inline constexpr const char* NotInCarrier = "NotInCarrier";
inline constexpr const char* SpanNotClosed = "SpanNotClosed";
inline constexpr const char* PhiNotInvolutive = "PhiNotInvolutive";
inline constexpr const char* NotFaithful = "NotFaithful";
inline constexpr const char* NotInvariant = "NotInvariant";
inline constexpr const char* NotBijective = "NotBijective";
inline constexpr const char* NotExactFactorization = "NotExactFactorization";
inline constexpr const char* UnknownExample = "UnknownExample";
inline constexpr const char* ParseError = "ParseError";
}  // namespace errkind

}  // namespace mqg
