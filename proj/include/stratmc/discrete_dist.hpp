#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "stratmc/rational.hpp"

namespace stratmc {

inline constexpr std::size_t kDefaultSupportCap = 1'000'000;

// Finite distribution on rational support: strictly increasing support,
// positive probabilities summing to one, all exact.
class DiscreteDist {
 public:
  DiscreteDist(std::vector<Rational> support, std::vector<Rational> probs);

  static DiscreteDist point_mass(const Rational& value);
  // Drops zero-weight atoms; weights must sum to one unless normalize is set.
  static DiscreteDist from_weights(const std::map<Rational, Rational>& weights,
                                   bool normalize = false);

  const std::vector<Rational>& support() const { return support_; }
  const std::vector<Rational>& probs() const { return probs_; }
  std::size_t size() const { return support_.size(); }

  Rational mean() const;
  Rational variance() const;
  Rational cdf(const Rational& t) const;       // P(X <= t)
  Rational prob_at(const Rational& v) const;
  Rational stop_loss(const Rational& t) const;  // E[(X - t)+]

  Rational min() const { return support_.front(); }
  Rational max() const { return support_.back(); }

  DiscreteDist scaled(const Rational& factor) const;  // law of factor * X, factor != 0
  DiscreteDist shifted(const Rational& offset) const;

  // Law of X + Y for independent X, Y; throws std::length_error past the cap.
  static DiscreteDist convolve(const DiscreteDist& x, const DiscreteDist& y,
                               std::size_t support_cap = kDefaultSupportCap);
  static DiscreteDist iid_sum(const DiscreteDist& x, int count,
                              std::size_t support_cap = kDefaultSupportCap);
  // Weights must be positive and sum to one.
  static DiscreteDist mixture(const std::vector<std::pair<Rational, const DiscreteDist*>>& parts);

  friend bool operator==(const DiscreteDist& a, const DiscreteDist& b) {
    return a.support_ == b.support_ && a.probs_ == b.probs_;
  }

 private:
  std::vector<Rational> support_;
  std::vector<Rational> probs_;
};

}  // namespace stratmc
