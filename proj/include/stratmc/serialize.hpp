#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "stratmc/estimators.hpp"
#include "stratmc/function_model.hpp"
#include "stratmc/measure_space.hpp"

namespace stratmc {

// Rationals travel as exact fraction strings ("3/4", "-2").

nlohmann::json to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PiecewiseConstantFn& f);
PiecewiseConstantFn function_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NoiseSpec& noise);
NoiseSpec noise_from_json(const nlohmann::json& j);

// value, exact fraction, decimal per row.
void write_dist_csv(std::ostream& out, const DiscreteDist& dist);

// replicate, value rows plus a side-channel metadata object.
void write_replication_csv(std::ostream& out, const Replication& rep);
nlohmann::json replication_metadata(const Replication& rep, int sample_size,
                                    const NoiseSpec& noise);

// Order-verdict report: {relation, result, witness_point?, inputs_digest}.
nlohmann::json verdict_json(const std::string& relation, bool result,
                            const std::optional<Rational>& witness,
                            const std::string& inputs_digest);

std::string fnv1a_digest(const std::string& text);

}  // namespace stratmc
