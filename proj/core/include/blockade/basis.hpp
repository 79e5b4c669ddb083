// basis.hpp — Labeled transition-operator basis and its product algebra

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace blockade {

// One transition operator |from><to| over a finite set of integer state ids.
struct TransitionLabel {
    std::int32_t from{0};
    std::int32_t to{0};

    bool is_population() const { return from == to; }
    friend bool operator==(const TransitionLabel&, const TransitionLabel&) = default;
};

// Ordered list of transition labels. Expectation vectors, generator rows and
// regression seeds are all indexed by the position of a label in this list.
//
// The operator product follows |a><b| |c><d| = delta_bc |a><d|; a product that
// lands on a label not present in the basis is treated as the zero operator,
// which is exact for the models built on top of this engine.
class OperatorBasis {
public:
    OperatorBasis() = default;
    explicit OperatorBasis(std::vector<TransitionLabel> labels);

    std::size_t size() const { return labels_.size(); }
    const TransitionLabel& label(std::size_t k) const { return labels_[k]; }
    const std::vector<TransitionLabel>& labels() const { return labels_; }

    std::optional<std::size_t> find(TransitionLabel l) const;

    // Index of the product label_a * label_b, or nullopt for the zero operator
    // (mismatched inner states or a label outside the basis).
    std::optional<std::size_t> product(std::size_t a, std::size_t b) const;

    // True when every nonzero pairwise product lands inside the basis.
    bool product_closed() const;

    // Positions of the population labels (from == to), in basis order.
    const std::vector<std::size_t>& population_indices() const { return populations_; }

private:
    static std::uint64_t key(TransitionLabel l);

    std::vector<TransitionLabel> labels_;
    std::vector<std::size_t> populations_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

} // namespace blockade
