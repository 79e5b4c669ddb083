// basis.cpp — OperatorBasis implementation

#include "blockade/basis.hpp"

#include <stdexcept>

namespace blockade {

OperatorBasis::OperatorBasis(std::vector<TransitionLabel> labels)
    : labels_(std::move(labels))
{
    index_.reserve(labels_.size());
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        const auto [it, inserted] = index_.emplace(key(labels_[k]), k);
        if (!inserted) {
            throw std::invalid_argument("OperatorBasis: duplicate transition label");
        }
        if (labels_[k].is_population()) populations_.push_back(k);
    }
}

std::uint64_t OperatorBasis::key(TransitionLabel l)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(l.from)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(l.to));
}

std::optional<std::size_t> OperatorBasis::find(TransitionLabel l) const
{
    const auto it = index_.find(key(l));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> OperatorBasis::product(std::size_t a, std::size_t b) const
{
    const TransitionLabel& la = labels_.at(a);
    const TransitionLabel& lb = labels_.at(b);
    if (la.to != lb.from) return std::nullopt;
    return find({la.from, lb.to});
}

bool OperatorBasis::product_closed() const
{
    for (std::size_t a = 0; a < labels_.size(); ++a) {
        for (std::size_t b = 0; b < labels_.size(); ++b) {
            if (labels_[a].to != labels_[b].from) continue;
            if (!find({labels_[a].from, labels_[b].to})) return false;
        }
    }
    return true;
}

} // namespace blockade
