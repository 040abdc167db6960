#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace peaksharp {

/// Failure categories raised by the analysis and simulation layers.
enum class ErrorKind {
  range,                  // K (or another parameter) outside its declared range
  validation,             // network or perturbation violates a model invariant
  diffusion_nonpositive,  // B(x) <= 0 somewhere on the analysis grid
  tail_mass,              // truncation policy could not bound the density tail
  degenerate_root,        // tangential root of the drift; modality ill-defined
  no_peaks,               // drift has no peak at all
  structure,              // peaks and valleys do not interleave
  zero_peak_density,      // density at a peak underflowed
  singular_system,        // truncated CME has several closed classes
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace peaksharp
