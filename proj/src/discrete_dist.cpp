#include "stratmc/discrete_dist.hpp"

#include <algorithm>
#include <stdexcept>

namespace stratmc {

DiscreteDist::DiscreteDist(std::vector<Rational> support, std::vector<Rational> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty() || support_.size() != probs_.size())
    throw std::invalid_argument("support and probabilities must match and be non-empty");
  Rational total = 0;
  for (size_t i = 0; i < support_.size(); ++i) {
    if (i > 0 && support_[i] <= support_[i - 1])
      throw std::invalid_argument("support must be strictly increasing");
    if (probs_[i] <= 0) throw std::invalid_argument("probabilities must be positive");
    total += probs_[i];
  }
  if (total != 1) throw std::invalid_argument("probabilities must sum to one");
}

DiscreteDist DiscreteDist::point_mass(const Rational& value) {
  return DiscreteDist({value}, {Rational(1)});
}

DiscreteDist DiscreteDist::from_weights(const std::map<Rational, Rational>& weights,
                                        bool normalize) {
  Rational total = 0;
  for (const auto& [v, w] : weights) {
    if (w < 0) throw std::invalid_argument("negative weight");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("all weights are zero");
  std::vector<Rational> support, probs;
  support.reserve(weights.size());
  probs.reserve(weights.size());
  for (const auto& [v, w] : weights) {
    if (w == 0) continue;
    support.push_back(v);
    probs.push_back(normalize ? w / total : w);
  }
  return DiscreteDist(std::move(support), std::move(probs));
}

Rational DiscreteDist::mean() const {
  Rational m = 0;
  for (size_t i = 0; i < support_.size(); ++i) m += support_[i] * probs_[i];
  return m;
}

Rational DiscreteDist::variance() const {
  const Rational m = mean();
  Rational v = 0;
  for (size_t i = 0; i < support_.size(); ++i) {
    const Rational d = support_[i] - m;
    v += d * d * probs_[i];
  }
  return v;
}

Rational DiscreteDist::cdf(const Rational& t) const {
  Rational total = 0;
  for (size_t i = 0; i < support_.size() && support_[i] <= t; ++i) total += probs_[i];
  return total;
}

Rational DiscreteDist::prob_at(const Rational& v) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), v);
  if (it == support_.end() || *it != v) return 0;
  return probs_[static_cast<size_t>(it - support_.begin())];
}

Rational DiscreteDist::stop_loss(const Rational& t) const {
  Rational total = 0;
  for (size_t i = support_.size(); i-- > 0;) {
    if (support_[i] <= t) break;
    total += (support_[i] - t) * probs_[i];
  }
  return total;
}

DiscreteDist DiscreteDist::scaled(const Rational& factor) const {
  if (factor == 0) throw std::invalid_argument("scale factor must be non-zero");
  std::vector<Rational> support(support_.size());
  std::vector<Rational> probs = probs_;
  for (size_t i = 0; i < support_.size(); ++i) support[i] = support_[i] * factor;
  if (factor < 0) {
    std::reverse(support.begin(), support.end());
    std::reverse(probs.begin(), probs.end());
  }
  return DiscreteDist(std::move(support), std::move(probs));
}

DiscreteDist DiscreteDist::shifted(const Rational& offset) const {
  std::vector<Rational> support(support_.size());
  for (size_t i = 0; i < support_.size(); ++i) support[i] = support_[i] + offset;
  return DiscreteDist(std::move(support), probs_);
}

DiscreteDist DiscreteDist::convolve(const DiscreteDist& x, const DiscreteDist& y,
                                    std::size_t support_cap) {
  if (x.size() * y.size() > support_cap)
    throw std::length_error("convolution support would exceed the configured cap");
  std::map<Rational, Rational> weights;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j)
      weights[x.support_[i] + y.support_[j]] += x.probs_[i] * y.probs_[j];
  if (weights.size() > support_cap)
    throw std::length_error("convolution support would exceed the configured cap");
  return from_weights(weights);
}

DiscreteDist DiscreteDist::iid_sum(const DiscreteDist& x, int count,
                                   std::size_t support_cap) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  DiscreteDist acc = x;
  for (int i = 1; i < count; ++i) acc = convolve(acc, x, support_cap);
  return acc;
}

DiscreteDist DiscreteDist::mixture(
    const std::vector<std::pair<Rational, const DiscreteDist*>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mixture needs components");
  Rational total = 0;
  std::map<Rational, Rational> weights;
  for (const auto& [w, dist] : parts) {
    if (w <= 0) throw std::invalid_argument("mixture weights must be positive");
    total += w;
    for (size_t i = 0; i < dist->size(); ++i)
      weights[dist->support_[i]] += w * dist->probs_[i];
  }
  if (total != 1) throw std::invalid_argument("mixture weights must sum to one");
  return from_weights(weights);
}

}  // namespace stratmc
