#pragma once

#include <cstddef>
#include <vector>

namespace multiway {

/// Per-sweep history of an alternating fitter.
struct FitTrace {
  std::vector<double> fits;  // relative fit after each sweep
  std::size_t iterations = 0;
  bool converged = false;
  /// Diverging-components pattern detected while the fit was still improving.
  bool degenerate = false;
};

}  // namespace multiway
