#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "deckopt/errors.hpp"
#include "deckopt/mdp.hpp"
#include "deckopt/rng.hpp"

// Prioritized experience replay: transitions are sampled with probability
// proportional to (|TD error| + eps)^alpha, with importance weights that
// anneal toward full bias correction as beta approaches 1.

namespace deckopt {

/// Binary indexed tree over leaf values supporting O(log n) point update,
/// prefix-sum descent and total sum.
class SumTree {
public:
    explicit SumTree(std::size_t leaves = 0) { reset(leaves); }

    void reset(std::size_t leaves) {
        base_ = 1;
        while (base_ < leaves) base_ <<= 1;
        node_.assign(2 * base_, 0.0);
        leaves_ = leaves;
    }

    std::size_t leaves() const { return leaves_; }
    double total() const { return node_[1]; }
    double leaf_value(std::size_t i) const { return node_[base_ + i]; }

    void update(std::size_t i, double value) {
        std::size_t node = base_ + i;
        node_[node] = value;
        for (node >>= 1; node >= 1; node >>= 1)
            node_[node] = node_[2 * node] + node_[2 * node + 1];
    }

    /// Index of the leaf whose cumulative range contains mass u in [0, total).
    std::size_t find_prefix(double u) const {
        std::size_t node = 1;
        while (node < base_) {
            double left = node_[2 * node];
            if (u < left) {
                node = 2 * node;
            } else {
                u -= left;
                node = 2 * node + 1;
            }
        }
        std::size_t leaf = node - base_;
        return leaf < leaves_ ? leaf : leaves_ - 1;
    }

private:
    std::size_t base_ = 1;
    std::size_t leaves_ = 0;
    std::vector<double> node_;
};

struct ReplayConfig {
    std::size_t capacity = 100000;
    double alpha = 0.6;           // priority exponent
    double beta_start = 0.0;      // importance-weight exponent at the first draw
    double beta_step = 1e-5;      // annealed per sampling call, capped at 1
    double priority_eps = 1e-6;   // keeps zero-error transitions sampleable
};

class PrioritizedReplay {
public:
    explicit PrioritizedReplay(ReplayConfig cfg = {})
        : cfg_(cfg), tree_(cfg.capacity), beta_(cfg.beta_start) {
        if (cfg_.capacity < 1) throw InvalidArgument("replay: capacity must be >= 1");
        entries_.reserve(cfg_.capacity);
        priorities_.reserve(cfg_.capacity);
    }

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return cfg_.capacity; }
    double beta() const { return std::min(1.0, beta_); }
    double max_priority() const { return size() == 0 ? 1.0 : max_priority_; }
    const Transition& entry(std::size_t slot) const { return entries_[slot]; }
    double priority(std::size_t slot) const { return priorities_[slot]; }

    /// New transitions enter at the buffer's current maximum priority so each
    /// is sampled at least once before its own error is known. The oldest
    /// entry is evicted once the buffer is full.
    void insert(Transition tr) {
        double p = max_priority();
        std::size_t slot;
        if (entries_.size() < cfg_.capacity) {
            slot = entries_.size();
            entries_.push_back(std::move(tr));
            priorities_.push_back(p);
        } else {
            slot = write_pos_;
            write_pos_ = (write_pos_ + 1) % cfg_.capacity;
            double evicted = priorities_[slot];
            entries_[slot] = std::move(tr);
            priorities_[slot] = p;
            if (evicted >= max_priority_) rescan_max();
        }
        if (p > max_priority_) max_priority_ = p;
        tree_.update(slot, mass(p));
    }

    struct Sample {
        std::size_t slot = 0;
        double weight = 0.0; // normalized importance weight in (0, 1]
    };

    /// Draws m slots (with replacement) proportionally to priority mass and
    /// advances the beta schedule by one step.
    std::vector<Sample> sample(int m, std::uint64_t seed) {
        if (m < 1) throw InvalidArgument("replay: batch size must be >= 1");
        if (entries_.size() < static_cast<std::size_t>(m))
            throw InsufficientData("replay: fewer stored transitions than batch size");
        double b = beta();
        beta_ += cfg_.beta_step;
        double total = tree_.total();
        double min_mass = tree_.leaf_value(0);
        for (std::size_t i = 1; i < entries_.size(); ++i)
            min_mass = std::min(min_mass, tree_.leaf_value(i));
        double count = static_cast<double>(entries_.size());
        double max_weight = std::pow(count * (min_mass / total), -b);
        Rng rng(seed);
        std::vector<Sample> out;
        out.reserve(m);
        for (int i = 0; i < m; ++i) {
            std::size_t slot = tree_.find_prefix(rng.unit_real() * total);
            double prob = tree_.leaf_value(slot) / total;
            out.push_back(Sample{slot, std::pow(count * prob, -b) / max_weight});
        }
        return out;
    }

    void update_priority(std::size_t slot, double abs_delta) {
        if (slot >= entries_.size()) throw InvalidArgument("replay: bad slot");
        if (!(abs_delta >= 0.0))
            throw InvalidArgument("replay: priority must be non-negative");
        double old = priorities_[slot];
        priorities_[slot] = abs_delta;
        tree_.update(slot, mass(abs_delta));
        if (abs_delta > max_priority_)
            max_priority_ = abs_delta;
        else if (old >= max_priority_ && abs_delta < old)
            rescan_max();
    }

private:
    double mass(double priority) const {
        return std::pow(priority + cfg_.priority_eps, cfg_.alpha);
    }

    void rescan_max() {
        max_priority_ = 0.0;
        for (double p : priorities_)
            if (p > max_priority_) max_priority_ = p;
    }

    ReplayConfig cfg_;
    std::vector<Transition> entries_;
    std::vector<double> priorities_;
    SumTree tree_;
    std::size_t write_pos_ = 0;
    double max_priority_ = 0.0;
    double beta_;
};

} // namespace deckopt
