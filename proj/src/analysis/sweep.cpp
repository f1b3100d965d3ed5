#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "nefmul/analysis/metrics.hpp"
#include "nefmul/nef/rng.hpp"

namespace nefmul {

SweepResult sweep_neurons(Component c, const std::vector<std::size_t>& counts,
                          std::size_t trials_per_count,
                          std::uint64_t master_seed,
                          const MeasureOptions& opt) {
    if (counts.empty() || trials_per_count == 0) {
        throw std::invalid_argument(
            "sweep_neurons: need at least one count and one trial");
    }
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] <= counts[i - 1]) {
            throw std::invalid_argument(
                "sweep_neurons: counts must be strictly increasing");
        }
    }

    SweepResult sweep;
    sweep.neuron_counts = counts;
    for (const std::size_t count : counts) {
        MetricsReport agg;
        agg.component = component_name(c);
        agg.neurons_per_ensemble = count;
        double mae_weighted = 0.0;
        for (std::size_t s = 0; s < trials_per_count; ++s) {
            // Fresh component per (count, seed) row.
            const std::uint64_t row_seed =
                mix_seed(mix_seed(master_seed, count), s);
            MetricsReport row =
                measure_component(c, count, 1, row_seed, opt);
            row.seeds.assign(1, row_seed);
            agg.n_trials += 1;
            agg.seeds.push_back(row_seed);
            mae_weighted += row.mae * static_cast<double>(row.total_bits);
            agg.bit_errors += row.bit_errors;
            agg.total_bits += row.total_bits;
            agg.wall_time_s += row.wall_time_s;
            sweep.rows.push_back(std::move(row));
        }
        agg.mae = mae_weighted / static_cast<double>(agg.total_bits);
        agg.accuracy = (1.0 - agg.mae) * 100.0;
        agg.mee = static_cast<double>(agg.bit_errors) /
                  static_cast<double>(agg.total_bits);
        sweep.per_count.push_back(std::move(agg));
    }

    std::sort(sweep.rows.begin(), sweep.rows.end(),
              [](const MetricsReport& a, const MetricsReport& b) {
                  if (a.neurons_per_ensemble != b.neurons_per_ensemble) {
                      return a.neurons_per_ensemble < b.neurons_per_ensemble;
                  }
                  return a.seeds.front() < b.seeds.front();
              });
    return sweep;
}

void write_csv(std::ostream& os, const std::vector<MetricsReport>& rows) {
    std::vector<const MetricsReport*> ordered;
    ordered.reserve(rows.size());
    for (const MetricsReport& r : rows) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const MetricsReport* a, const MetricsReport* b) {
                         if (a->neurons_per_ensemble !=
                             b->neurons_per_ensemble) {
                             return a->neurons_per_ensemble <
                                    b->neurons_per_ensemble;
                         }
                         const std::uint64_t sa =
                             a->seeds.empty() ? 0 : a->seeds.front();
                         const std::uint64_t sb =
                             b->seeds.empty() ? 0 : b->seeds.front();
                         return sa < sb;
                     });
    os << "component,neurons,seed,mae,accuracy,mee,bit_errors,total_bits,"
          "wall_time_s\n";
    char buf[160];
    for (const MetricsReport* rp : ordered) {
        const MetricsReport& r = *rp;
        const std::uint64_t seed = r.seeds.empty() ? 0 : r.seeds.front();
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g", r.mae, r.accuracy,
                      r.mee);
        os << r.component << ',' << r.neurons_per_ensemble << ',' << seed
           << ',' << buf << ',' << r.bit_errors << ',' << r.total_bits << ',';
        std::snprintf(buf, sizeof(buf), "%.3f", r.wall_time_s);
        os << buf << '\n';
    }
}

std::size_t knee_estimate(const SweepResult& sweep) {
    if (sweep.per_count.empty()) {
        throw std::invalid_argument("knee_estimate: empty sweep");
    }
    double best = sweep.per_count.front().accuracy;
    for (const MetricsReport& r : sweep.per_count) {
        best = std::max(best, r.accuracy);
    }
    for (std::size_t i = 0; i < sweep.per_count.size(); ++i) {
        if (sweep.per_count[i].accuracy >= best - 1.0) {
            return sweep.neuron_counts[i];
        }
    }
    return sweep.neuron_counts.back();
}

}  // namespace nefmul
