#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kundt {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression text could not be parsed. `position` is a 0-based byte offset
// into the input; `expected` describes what the parser wanted to see there.
struct SyntaxError : Error {
  std::size_t position;
  std::string expected;
  SyntaxError(std::size_t pos, const std::string& what_expected)
      : Error("syntax error at position " + std::to_string(pos) + ": expected " + what_expected),
        position(pos),
        expected(what_expected) {}
};

// Numeric evaluation hit a pole, a domain violation, or a non-finite value.
struct EvalError : Error {
  using Error::Error;
};

// The sampling zero test could not collect enough valid sample points
// inside the domain box (every retry landed on a pole or domain violation).
struct SamplingExhausted : Error {
  using Error::Error;
};

// A symbolic operation is undefined for the given input, e.g. a quotient
// whose denominator is identically zero.
struct DomainError : Error {
  using Error::Error;
};

// Metric determinant vanishes somewhere on the chart domain, or the matrix
// of a claimed invariant product is singular.
struct SingularMetric : Error {
  using Error::Error;
};

// Metric signature at the base point is not Lorentzian (-,+,...,+).
struct NotLorentzian : Error {
  using Error::Error;
};

// Two objects that must live on the same chart do not.
struct ChartMismatch : Error {
  using Error::Error;
};

// A field required to be lightlike is not (g(V,V) not identically zero),
// or it vanishes where it must not.
struct NotLightlike : Error {
  using Error::Error;
};

// A construction that needs a nonvanishing quantity at the base point
// found it to be zero there.
struct DegenerateAtBasePoint : Error {
  using Error::Error;
};

// The requested check is only defined when the orthogonal distribution of
// the field is integrable (twist-free), and it is not.
struct RequiresIntegrability : Error {
  using Error::Error;
};

// The metric is not in the adapted coordinate form. Carries one message per
// failing structural condition.
struct NotAdapted : Error {
  std::vector<std::string> failures;
  explicit NotAdapted(std::vector<std::string> fails)
      : Error(join(fails)), failures(std::move(fails)) {}

 private:
  static std::string join(const std::vector<std::string>& fails) {
    std::string s = "metric is not in adapted form";
    for (const auto& f : fails) s += "; " + f;
    return s;
  }
};

// Leaf curvature was requested for a foliation whose leaves are not
// totally geodesic, so the induced connection does not close on the leaves.
struct NotTotallyGeodesic : Error {
  using Error::Error;
};

// A claimed frame is degenerate (its vectors fail to be pointwise
// independent at the base point, or a required pairing vanishes).
struct FrameDegenerate : Error {
  using Error::Error;
};

// A constructed metric failed its own verification pass.
struct PostVerificationFailed : Error {
  using Error::Error;
};

// Metric entries define a degenerate bilinear form.
struct DegenerateMetric : Error {
  using Error::Error;
};

// Catalog lookup with a name that is not in the roster.
struct UnknownEntry : Error {
  using Error::Error;
};

// A parameter value is malformed or outside its documented range.
struct BadParameter : Error {
  using Error::Error;
};

}  // namespace kundt
