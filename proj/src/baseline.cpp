#include "amsom/baseline.hpp"

#include "amsom/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace amsom {

TrainResult train_batch_som(const Dataset& data, MapState map, const TrainConfig& config,
                            const EpochCallback& on_epoch) {
    config.validate();
    if (data.dim() != map.dim()) throw_dimension_mismatch(data.dim(), map.dim());
    if (map.size() < 1) throw StructuralError("cannot train an empty map");
    const double sigma0 = config.sigma0 > 0.0 ? config.sigma0 : std::max(default_sigma0(map), config.sigma_final);

    TrainResult result;
    for (int t = 1; t <= config.max_epochs; ++t) {
        const double sigma = sigma_at(t, config.max_epochs, sigma0, config.sigma_final);
        const Assignment start = assign_all(data, map);
        for (Index w : start.winner) ++map.win_count[static_cast<std::size_t>(w)];
        map.weights = batch_weight_update(map, start, data, sigma);

        const Assignment end = assign_all(data, map);
        EpochReport rep;
        rep.epoch = t;
        rep.sigma = sigma;
        rep.mqe = mean_quantization_error(end);
        rep.neurons = map.size();
        rep.edges = map.edge_count();
        rep.neuron_qe = neuron_errors(end, map.size(), config.neuron_error);
        if (!std::isfinite(rep.mqe)) {
            std::ostringstream msg;
            msg << "batch SOM: non-finite mean quantization error at epoch " << t;
            throw TrainingError(msg.str());
        }
        if (on_epoch) on_epoch(rep, map);
        const bool converged = !result.reports.empty() && std::abs(rep.mqe - result.reports.back().mqe) < config.eps1;
        result.reports.push_back(std::move(rep));
        if (converged) break;
    }
    result.map = std::move(map);
    return result;
}

}  // namespace amsom
