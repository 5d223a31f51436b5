#pragma once

#include <stdexcept>
#include <string>

namespace syz {

// Parameters that cannot yield a model (Brill-Noether / degree bookkeeping).
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate or inconsistent model data (coincident node parameters, divisor
// on a node, pole exceeding a layout bound, ...).
struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix size guard tripped.
struct cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal invariant failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace syz
