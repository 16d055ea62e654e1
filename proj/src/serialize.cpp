#include "stratmc/serialize.hpp"

#include <ostream>
#include <sstream>

#include "stratmc/discrete_dist.hpp"

namespace stratmc {

namespace {

using nlohmann::json;

json rational_list(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& v : values) out.push_back(to_string(v));
  return out;
}

std::vector<Rational> rationals_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& item : j) out.push_back(parse_rational(item.get<std::string>()));
  return out;
}

json box_json(const Box& b) { return json::array({rational_list(b.lower), rational_list(b.upper)}); }

Box box_from(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("box must be a [lower, upper] pair");
  return Box(rationals_from(j[0]), rationals_from(j[1]));
}

}  // namespace

nlohmann::json to_json(const Partition& p) {
  json strata = json::array();
  for (const Stratum& s : p.strata()) {
    json boxes = json::array();
    for (const Box& b : s.region) boxes.push_back(box_json(b));
    strata.push_back({{"boxes", std::move(boxes)}, {"k", s.allocation}});
  }
  json out{{"d", p.dimension()}, {"n", p.total_samples()}, {"strata", std::move(strata)}};
  if (!p.base().uniform()) {
    json marginals = json::array();
    for (const auto& m : p.base().marginals()) {
      json pts = json::array();
      for (const auto& [x, y] : m.points)
        pts.push_back(json::array({to_string(x), to_string(y)}));
      marginals.push_back(std::move(pts));
    }
    out["marginals"] = std::move(marginals);
  }
  return out;
}

Partition partition_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  std::vector<QuantileTransform> marginals;
  if (j.contains("marginals")) {
    for (const auto& m : j.at("marginals")) {
      QuantileTransform t;
      for (const auto& pt : m)
        t.points.emplace_back(parse_rational(pt[0].get<std::string>()),
                              parse_rational(pt[1].get<std::string>()));
      marginals.push_back(std::move(t));
    }
  }
  BaseMeasure base = marginals.empty() ? BaseMeasure(d) : BaseMeasure(d, std::move(marginals));
  std::vector<Stratum> strata;
  for (const auto& s : j.at("strata")) {
    std::vector<Box> boxes;
    for (const auto& b : s.at("boxes")) boxes.push_back(box_from(b));
    strata.emplace_back(std::move(boxes), s.at("k").get<int>());
  }
  return Partition(std::move(base), std::move(strata), n);
}

nlohmann::json to_json(const PiecewiseConstantFn& f) {
  json cells = json::array();
  for (const auto& c : f.cells())
    cells.push_back({{"box", box_json(c.box)}, {"value", to_string(c.value)}});
  return json{{"d", f.dimension()},
              {"cells", std::move(cells)},
              {"unit_range", f.unit_range_declared()}};
}

PiecewiseConstantFn function_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  std::vector<PiecewiseConstantFn::Cell> cells;
  for (const auto& c : j.at("cells"))
    cells.push_back({box_from(c.at("box")), parse_rational(c.at("value").get<std::string>())});
  return PiecewiseConstantFn(d, std::move(cells), j.value("unit_range", false));
}

nlohmann::json to_json(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseSpec::Kind::none:
      return json{{"kind", "none"}};
    case NoiseSpec::Kind::gaussian:
      return json{{"kind", "gaussian"}, {"variance", to_string(noise.param)}};
    case NoiseSpec::Kind::two_point:
      return json{{"kind", "two_point"}, {"magnitude", to_string(noise.param)}};
  }
  return json{{"kind", "none"}};
}

NoiseSpec noise_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return NoiseSpec::none();
  if (kind == "gaussian")
    return NoiseSpec::gaussian(parse_rational(j.at("variance").get<std::string>()));
  if (kind == "two_point")
    return NoiseSpec::two_point(parse_rational(j.at("magnitude").get<std::string>()));
  throw std::invalid_argument("unknown noise kind: " + kind);
}

void write_dist_csv(std::ostream& out, const DiscreteDist& dist) {
  out << "value,value_decimal,probability,probability_decimal\n";
  for (size_t i = 0; i < dist.size(); ++i)
    out << to_string(dist.support()[i]) << ',' << to_double(dist.support()[i]) << ','
        << to_string(dist.probs()[i]) << ',' << to_double(dist.probs()[i]) << '\n';
}

void write_replication_csv(std::ostream& out, const Replication& rep) {
  out << "replicate,value\n";
  for (size_t r = 0; r < rep.values.size(); ++r) out << r << ',' << rep.values[r] << '\n';
}

nlohmann::json replication_metadata(const Replication& rep, int sample_size,
                                    const NoiseSpec& noise) {
  return json{{"kind", estimator_kind_name(rep.kind)},
              {"seed", rep.seed},
              {"n", sample_size},
              {"partition_id", rep.partition_digest},
              {"replicates", rep.values.size()},
              {"noise", to_json(noise)}};
}

nlohmann::json verdict_json(const std::string& relation, bool result,
                            const std::optional<Rational>& witness,
                            const std::string& inputs_digest) {
  json out{{"relation", relation}, {"result", result}, {"inputs_digest", inputs_digest}};
  if (witness) out["witness_point"] = to_string(*witness);
  return out;
}

std::string fnv1a_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

}  // namespace stratmc
