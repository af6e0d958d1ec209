#pragma once

#include <stdexcept>
#include <string>

namespace semilin {

// Construction-time constraint violations (bad specs, bad configs).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Near-zero estimator denominator; carries no result, callers decide
// whether to drop the path or abort.
struct degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace semilin
