#include "pvar/variation.hpp"

#include <algorithm>
#include <limits>

namespace pvar {

double var_p_on_partition(const StepFunction& f, const PartitionWitness& witness,
                          const PExponent& p) {
    const auto& idx = witness.indices;
    const std::size_t m = f.last_index();
    if (idx.size() < 2 || idx.front() != 0 || idx.back() != m)
        throw std::invalid_argument("witness must be anchored at index 0 and index " +
                                    std::to_string(m));
    double sum = 0.0;
    for (std::size_t l = 1; l < idx.size(); ++l) {
        if (idx[l] > m)
            throw std::invalid_argument("witness index out of range at position " +
                                        std::to_string(l));
        if (!(idx[l - 1] < idx[l]))
            throw std::invalid_argument("non-monotone witness indices at position " +
                                        std::to_string(l));
        sum += abs_pow(f.values()[idx[l]] - f.values()[idx[l - 1]], p.value());
    }
    return sum;
}

std::pair<double, PartitionWitness> total_var_p(const StepFunction& f, const PExponent& p) {
    const auto& v = f.values();
    const std::size_t m = f.last_index();
    const double pv = p.value();

    // suffix[j] = best sum over anchored paths from j to m.
    std::vector<double> suffix(m + 1, 0.0);
    for (std::size_t j = m; j-- > 0;) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = j + 1; k <= m; ++k)
            best = std::max(best, abs_pow(v[k] - v[j], pv) + suffix[k]);
        suffix[j] = best;
    }

    // Greedy forward walk: the smallest next index attaining suffix[j] yields
    // the lexicographically smallest optimal witness. The winning candidate
    // recomputes bitwise the expression that defined suffix[j], so the exact
    // equality test always finds a successor.
    PartitionWitness witness;
    witness.indices.push_back(0);
    std::size_t j = 0;
    while (j < m) {
        std::size_t next = m;
        for (std::size_t k = j + 1; k <= m; ++k) {
            if (abs_pow(v[k] - v[j], pv) + suffix[k] == suffix[j]) {
                next = k;
                break;
            }
        }
        witness.indices.push_back(next);
        j = next;
    }
    witness.attained = var_p_on_partition(f, witness, p);
    return {witness.attained, witness};
}

double brute_force_var_p(const StepFunction& f, const PExponent& p) {
    const std::size_t m = f.last_index();
    if (m > 20)
        throw std::invalid_argument("brute-force oracle refuses m = " + std::to_string(m) +
                                    " (limit 20)");
    const auto& v = f.values();
    const double pv = p.value();
    const std::uint32_t interior = static_cast<std::uint32_t>(m) - 1;
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
        double sum = 0.0;
        complexd prev = v[0];
        for (std::uint32_t b = 0; b < interior; ++b) {
            if (mask & (std::uint64_t{1} << b)) {
                sum += abs_pow(v[b + 1] - prev, pv);
                prev = v[b + 1];
            }
        }
        sum += abs_pow(v[m] - prev, pv);
        best = std::max(best, sum);
    }
    return best;
}

double bvp_norm(const StepFunction& f, const PExponent& p) {
    double var = total_var_p(f, p).first;
    return sup_norm(f) + std::pow(var, 1.0 / p.value());
}

InverseResult pointwise_inverse(const StepFunction& f, const PExponent& p, double margin_floor) {
    const double margin = inf_modulus(f);
    if (margin < margin_floor)
        throw std::invalid_argument("not bounded away from zero: inf|f| = " +
                                    std::to_string(margin));
    std::vector<complexd> values(f.values().size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = 1.0 / f.values()[i];
    InverseResult out{StepFunction(f.breakpoints(), std::move(values), f.field()),
                      bvp_norm(f, p) / (margin * margin)};
    return out;
}

double max_selection_var_p(std::span<const complexd> values, const PExponent& p) {
    return max_selection_var_p_witness(values, p).first;
}

std::pair<double, std::vector<std::size_t>> max_selection_var_p_witness(
    std::span<const complexd> values, const PExponent& p) {
    const std::size_t n = values.size();
    const double pv = p.value();
    if (n < 2) return {0.0, {}};
    // best[j]: max selection sum ending at j (possibly the singleton {j}).
    std::vector<double> best(n, 0.0);
    std::vector<std::ptrdiff_t> prev(n, -1);
    double global = 0.0;
    std::size_t global_at = 0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double candidate = best[i] + abs_pow(values[j] - values[i], pv);
            if (candidate > best[j]) {
                best[j] = candidate;
                prev[j] = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (best[j] > global) {
            global = best[j];
            global_at = j;
        }
    }
    std::vector<std::size_t> selection;
    if (global > 0.0) {
        for (std::ptrdiff_t at = static_cast<std::ptrdiff_t>(global_at); at >= 0; at = prev[at])
            selection.push_back(static_cast<std::size_t>(at));
        std::reverse(selection.begin(), selection.end());
    }
    return {global, selection};
}

}  // namespace pvar
