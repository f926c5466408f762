#pragma once

// Per-thread window evaluators for the parallel feature-map driver. Each
// evaluator owns its scratch buffers; one instance per OpenMP thread.

#include <memory>
#include <span>

#include "mprad/featuremap.hpp"

namespace mprad::detail {

class WindowEvaluator {
public:
    virtual ~WindowEvaluator() = default;

    /// Fills `out` (one slot per family feature, in family_feature_names
    /// order) for the window centred at (row, col).
    virtual void evaluate(int row, int col, std::span<double> out) = 0;
};

/// `need_mi` controls the (costly) inclusion-exclusion term for tspm.
std::unique_ptr<WindowEvaluator> make_fast_evaluator(const QuantizedStack& q,
                                                     const KernelConfig& cfg, bool need_mi);

/// Evaluator that calls the public builders per window.
std::unique_ptr<WindowEvaluator> make_reference_evaluator(const QuantizedStack& q,
                                                          const KernelConfig& cfg, bool need_mi);

}  // namespace mprad::detail
