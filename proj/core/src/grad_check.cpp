#include "marlcom/grad_check.hpp"

#include <cmath>
#include <vector>

namespace marlcom {

GradCheckReport grad_check(const std::function<double()>& loss_fn,
                           const std::function<double()>& grad_fn,
                           const ParamRefs& params, double h) {
    for (auto* b : params) b->zero_grads();
    grad_fn();
    // snapshot analytic grads; perturbations below must not see them
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (auto* b : params) analytic.push_back(b->grads);

    GradCheckReport report;
    for (std::size_t bi = 0; bi < params.size(); ++bi) {
        ParameterBlock& blk = *params[bi];
        for (std::size_t i = 0; i < blk.size(); ++i) {
            const double orig = blk.values[i];
            blk.values[i] = orig + h;
            const double lp = loss_fn();
            blk.values[i] = orig - h;
            const double lm = loss_fn();
            blk.values[i] = orig;
            const double numeric = (lp - lm) / (2.0 * h);
            const double a = analytic[bi][i];
            const double rel = std::fabs(a - numeric) / std::max(1.0, std::fabs(numeric));
            if (rel > report.max_rel_err) {
                report.max_rel_err = rel;
                report.worst_block = blk.name;
                report.worst_index = i;
                report.worst_analytic = a;
                report.worst_numeric = numeric;
            }
        }
    }
    for (auto* b : params) b->zero_grads();
    return report;
}

}  // namespace marlcom
