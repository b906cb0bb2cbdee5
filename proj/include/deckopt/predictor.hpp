#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"
#include "deckopt/json_util.hpp"
#include "deckopt/mlp.hpp"
#include "deckopt/rng.hpp"

// Supervised stand-in for the match simulator: a network that maps a pair of
// decks (2N inputs, no step counter) to a predicted win rate. It lets the
// Monte-Carlo baseline score candidate decks without playing a single match.

namespace deckopt {

struct LabeledPair {
    DeckVector x_p;
    DeckVector x_o;
    double label = 0.0; // evaluated win rate
};

struct PredictorDataset {
    int n = 0;
    int d = 0;
    int matches_per_label = 0;
    std::vector<LabeledPair> pairs;
};

/// Uniformly random deck pairs labeled by the simulator; every tenth pair is
/// a mirror pair, anchoring the 0.5 line.
inline PredictorDataset build_predictor_dataset(const Evaluator& evaluate, int d,
                                                int size, std::uint64_t seed) {
    if (size < 1) throw InvalidArgument("build_predictor_dataset: size must be >= 1");
    int n = evaluate.pool().n_cards;
    PredictorDataset ds;
    ds.n = n;
    ds.d = d;
    ds.matches_per_label = evaluate.num_matches();
    ds.pairs.reserve(size);
    for (int i = 0; i < size; ++i) {
        LabeledPair pair;
        pair.x_p = random_deck(n, d, derive_seed(seed, "pair_p", i));
        pair.x_o = (i % 10 == 9)
                       ? pair.x_p
                       : random_deck(n, d, derive_seed(seed, "pair_o", i));
        pair.label = evaluate(pair.x_p, pair.x_o, derive_seed(seed, "label", i)).value;
        ds.pairs.push_back(std::move(pair));
    }
    return ds;
}

inline std::vector<double> pair_features(const DeckVector& x_p, const DeckVector& x_o) {
    int n = x_p.size();
    std::vector<double> phi(2 * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (x_p.test(i)) phi[i] = 1.0;
        if (x_o.test(i)) phi[n + i] = 1.0;
    }
    return phi;
}

struct WinRatePredictor {
    MlpParams net;
    int n = 0;
    int dataset_size = 0;
    int matches_per_label = 0;

    /// Predicted win rate, clamped to the valid range.
    double predict(const DeckVector& x_p, const DeckVector& x_o) const {
        if (x_p.size() != n || x_o.size() != n)
            throw InvalidArgument("predict: deck length does not match predictor");
        std::vector<double> phi = pair_features(x_p, x_o);
        return std::clamp(q_forward(net, phi), 0.0, 1.0);
    }
};

struct PredictorHyperparams {
    int hidden = 64;
    double learning_rate = 1e-3; // Adam step size
    int batch_size = 32;
    int epochs = 60;
    std::uint64_t seed = 0;
};

struct PredictorMetrics {
    double cv_mse = 0.0; // pooled over the 10 held-out folds
    double cv_r2 = 0.0;
    double train_mse = 0.0; // final model on the full dataset
};

namespace detail {

/// Adam-driven squared-error regression over the given sample indices.
inline MlpParams fit_regression(const PredictorDataset& ds,
                                const std::vector<std::size_t>& train_idx,
                                const PredictorHyperparams& hp,
                                std::uint64_t seed) {
    int input = 2 * ds.n;
    MlpParams net = init_mlp(input, hp.hidden, derive_seed(seed, "init"));
    MlpGrad grad = zero_grad(net);
    MlpGrad m1 = zero_grad(net), m2 = zero_grad(net);
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step = 0;
    Rng rng(derive_seed(seed, "order"));
    std::vector<std::size_t> order = train_idx;

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t start = 0; start < order.size();
             start += hp.batch_size) {
            std::size_t stop = std::min(order.size(),
                                        start + static_cast<std::size_t>(hp.batch_size));
            std::fill(grad.w1.begin(), grad.w1.end(), 0.0);
            std::fill(grad.b1.begin(), grad.b1.end(), 0.0);
            std::fill(grad.w2.begin(), grad.w2.end(), 0.0);
            grad.b2 = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                const LabeledPair& pair = ds.pairs[order[k]];
                std::vector<double> phi = pair_features(pair.x_p, pair.x_o);
                ForwardCache cache;
                double out = q_forward_cached(net, phi.data(), phi.size(), cache);
                double residual = out - pair.label; // d(0.5 err^2)/d out
                for (int j = 0; j < net.hidden; ++j) {
                    double h = cache.hidden[j];
                    grad.w2[j] += residual * h;
                    if (h > 0.0) {
                        double up = residual * net.w2[j];
                        grad.b1[j] += up;
                        double* row = grad.w1.data() +
                                      static_cast<std::size_t>(j) * net.input;
                        for (int x = 0; x < net.input; ++x) row[x] += up * phi[x];
                    }
                }
                grad.b2 += residual;
            }
            double inv = 1.0 / static_cast<double>(stop - start);
            ++step;
            double bc1 = 1.0 - std::pow(beta1, step);
            double bc2 = 1.0 - std::pow(beta2, step);
            auto adam = [&](double& w, double& a1, double& a2, double g) {
                g *= inv;
                a1 = beta1 * a1 + (1.0 - beta1) * g;
                a2 = beta2 * a2 + (1.0 - beta2) * g * g;
                w -= hp.learning_rate * (a1 / bc1) / (std::sqrt(a2 / bc2) + eps);
            };
            for (std::size_t i = 0; i < net.w1.size(); ++i)
                adam(net.w1[i], m1.w1[i], m2.w1[i], grad.w1[i]);
            for (std::size_t i = 0; i < net.b1.size(); ++i)
                adam(net.b1[i], m1.b1[i], m2.b1[i], grad.b1[i]);
            for (std::size_t i = 0; i < net.w2.size(); ++i)
                adam(net.w2[i], m1.w2[i], m2.w2[i], grad.w2[i]);
            adam(net.b2, m1.b2, m2.b2, grad.b2);
        }
        if (!all_finite(net))
            throw TrainingDiverged("train_predictor: parameters left the finite range");
    }
    return net;
}

inline double dataset_mse(const MlpParams& net, const PredictorDataset& ds,
                          const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t i : idx) {
        std::vector<double> phi = pair_features(ds.pairs[i].x_p, ds.pairs[i].x_o);
        double out = std::clamp(q_forward(net, phi), 0.0, 1.0);
        double e = out - ds.pairs[i].label;
        sum += e * e;
    }
    return sum / idx.size();
}

} // namespace detail

struct PredictorResult {
    WinRatePredictor predictor;
    PredictorMetrics metrics;
};

/// Fits the predictor with 10-fold cross-validated error reporting, then
/// returns a final model trained on the full dataset.
inline PredictorResult train_predictor(const PredictorDataset& ds,
                                       const PredictorHyperparams& hp) {
    constexpr int kFolds = 10;
    if (ds.pairs.size() < static_cast<std::size_t>(kFolds * hp.batch_size))
        throw InsufficientData("train_predictor: dataset smaller than 10 batches");

    double label_mean = 0.0;
    for (const LabeledPair& p : ds.pairs) label_mean += p.label;
    label_mean /= ds.pairs.size();

    double ss_res = 0.0, ss_tot = 0.0;
    for (int fold = 0; fold < kFolds; ++fold) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < ds.pairs.size(); ++i)
            (static_cast<int>(i % kFolds) == fold ? test_idx : train_idx).push_back(i);
        MlpParams net = detail::fit_regression(ds, train_idx, hp,
                                               derive_seed(hp.seed, "fold", fold));
        for (std::size_t i : test_idx) {
            std::vector<double> phi = pair_features(ds.pairs[i].x_p, ds.pairs[i].x_o);
            double out = std::clamp(q_forward(net, phi), 0.0, 1.0);
            double e = out - ds.pairs[i].label;
            ss_res += e * e;
            double d = ds.pairs[i].label - label_mean;
            ss_tot += d * d;
        }
    }

    PredictorResult result;
    result.metrics.cv_mse = ss_res / ds.pairs.size();
    result.metrics.cv_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;

    std::vector<std::size_t> all_idx(ds.pairs.size());
    for (std::size_t i = 0; i < all_idx.size(); ++i) all_idx[i] = i;
    result.predictor.net = detail::fit_regression(ds, all_idx, hp,
                                                  derive_seed(hp.seed, "final"));
    result.predictor.n = ds.n;
    result.predictor.dataset_size = static_cast<int>(ds.pairs.size());
    result.predictor.matches_per_label = ds.matches_per_label;
    result.metrics.train_mse = detail::dataset_mse(result.predictor.net, ds, all_idx);
    return result;
}

// ---------------------------------------------------------------------------
// Persistence

/// One JSON object per line: {"x_p": [...], "x_o": [...], "label": y}.
inline void save_dataset_jsonl(const PredictorDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    json header{{"n", ds.n}, {"d", ds.d}, {"matches_per_label", ds.matches_per_label}};
    out << header.dump() << '\n';
    for (const LabeledPair& p : ds.pairs) {
        json j{{"x_p", p.x_p.card_ids()}, {"x_o", p.x_o.card_ids()}, {"label", p.label}};
        out << j.dump() << '\n';
    }
}

inline PredictorDataset load_dataset_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty dataset file: " + path);
    json header = json::parse(line);
    PredictorDataset ds;
    ds.n = header.at("n").get<int>();
    ds.d = header.at("d").get<int>();
    ds.matches_per_label = header.at("matches_per_label").get<int>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        LabeledPair p;
        p.x_p = DeckVector::from_cards(ds.n, j.at("x_p").get<std::vector<int>>());
        p.x_o = DeckVector::from_cards(ds.n, j.at("x_o").get<std::vector<int>>());
        p.label = j.at("label").get<double>();
        ds.pairs.push_back(std::move(p));
    }
    return ds;
}

inline constexpr int kPredictorFormatVersion = 1;

inline json predictor_to_json(const WinRatePredictor& p) {
    json j = mlp_to_json(p.net);
    j["format_version"] = kPredictorFormatVersion;
    j["kind"] = "win_rate_predictor";
    j["n"] = p.n;
    j["dataset_size"] = p.dataset_size;
    j["matches_per_label"] = p.matches_per_label;
    return j;
}

inline WinRatePredictor predictor_from_json(const json& j) {
    if (j.at("format_version").get<int>() != kPredictorFormatVersion)
        throw InvalidArgument("predictor: unsupported format version");
    if (j.at("kind").get<std::string>() != "win_rate_predictor")
        throw InvalidArgument("predictor: wrong checkpoint kind");
    WinRatePredictor p;
    p.net = mlp_from_json(j);
    p.n = j.at("n").get<int>();
    p.dataset_size = j.at("dataset_size").get<int>();
    p.matches_per_label = j.at("matches_per_label").get<int>();
    if (p.net.input != 2 * p.n)
        throw InvalidArgument("predictor: weight shape does not match n");
    return p;
}

} // namespace deckopt
