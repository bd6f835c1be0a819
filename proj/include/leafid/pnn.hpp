#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "leafid/errors.hpp"

namespace leafid {

/// Probabilistic neural network: training is exemplar storage, nothing is
/// optimized. Classification sums a Gaussian kernel over each class's
/// exemplars and takes the argmax.
struct PnnModel {
    std::vector<std::vector<std::vector<double>>> exemplars; // [class][sample][dim]
    std::vector<std::string> class_names;                    // may be empty
    double sigma = 0.0;
    std::size_t dimension = 0;

    std::size_t class_count() const { return exemplars.size(); }
};

struct ClassScores {
    std::vector<double> scores;
    int predicted = 0;
};

inline PnnModel train_pnn(const std::vector<std::vector<double>>& features,
                          const std::vector<int>& labels, double sigma,
                          std::vector<std::string> class_names = {}) {
    if (!(sigma > 0.0))
        throw Error(errc::non_positive_sigma, "sigma = " + std::to_string(sigma));
    if (features.size() != labels.size())
        throw Error(errc::dimension_mismatch,
                    std::to_string(features.size()) + " rows vs " +
                        std::to_string(labels.size()) + " labels");
    if (features.empty()) throw Error(errc::missing_class, "no training rows");

    int max_label = 0;
    for (int l : labels) {
        if (l < 0) throw Error(errc::unknown_class, "negative class id " + std::to_string(l));
        max_label = std::max(max_label, l);
    }

    PnnModel model;
    model.sigma = sigma;
    model.dimension = features.front().size();
    model.exemplars.resize(static_cast<std::size_t>(max_label) + 1);
    model.class_names = std::move(class_names);
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != model.dimension)
            throw Error(errc::dimension_mismatch,
                        "row " + std::to_string(i) + " has " +
                            std::to_string(features[i].size()) + " values, expected " +
                            std::to_string(model.dimension));
        model.exemplars[static_cast<std::size_t>(labels[i])].push_back(features[i]);
    }
    for (std::size_t j = 0; j < model.exemplars.size(); ++j)
        if (model.exemplars[j].empty())
            throw Error(errc::missing_class, "class " + std::to_string(j) + " has no exemplars");
    return model;
}

/// (1/n_j) * sum_k exp(-||x - X_k||^2 / (2 sigma^2)); always in (0, 1].
inline double class_score(const PnnModel& model, const std::vector<double>& x, int class_id) {
    if (class_id < 0 || static_cast<std::size_t>(class_id) >= model.class_count())
        throw Error(errc::unknown_class, "class id " + std::to_string(class_id));
    if (x.size() != model.dimension)
        throw Error(errc::dimension_mismatch,
                    "vector has " + std::to_string(x.size()) + " values, model expects " +
                        std::to_string(model.dimension));

    const auto& samples = model.exemplars[static_cast<std::size_t>(class_id)];
    const double inv_two_sigma2 = 1.0 / (2.0 * model.sigma * model.sigma);
    double acc = 0.0;
    for (const auto& ex : samples) {
        double dist2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - ex[i];
            dist2 += d * d;
        }
        acc += std::exp(-dist2 * inv_two_sigma2);
    }
    return acc / static_cast<double>(samples.size());
}

/// The fully normalized Parzen density: class_score times the Gaussian
/// prefactor 1/((2 pi)^(d/2) sigma^d). The prefactor is class-independent,
/// so it never changes the argmax; this is exposed for inspection only.
inline double full_parzen_density(const PnnModel& model, const std::vector<double>& x,
                                  int class_id) {
    const double score = class_score(model, x, class_id);
    const double d = static_cast<double>(model.dimension);
    const double log_prefactor =
        -0.5 * d * std::log(2.0 * std::numbers::pi) - d * std::log(model.sigma);
    return score * std::exp(log_prefactor);
}

/// Argmax of class_score over all classes; exact ties go to the lowest
/// class id.
inline ClassScores classify(const PnnModel& model, const std::vector<double>& x) {
    ClassScores result;
    result.scores.resize(model.class_count());
    for (std::size_t j = 0; j < model.class_count(); ++j)
        result.scores[j] = class_score(model, x, static_cast<int>(j));
    result.predicted = 0;
    for (std::size_t j = 1; j < result.scores.size(); ++j)
        if (result.scores[j] > result.scores[static_cast<std::size_t>(result.predicted)])
            result.predicted = static_cast<int>(j);
    return result;
}

} // namespace leafid
