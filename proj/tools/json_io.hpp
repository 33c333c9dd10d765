#pragma once

#include <json.hpp>

#include "qset/behavior.hpp"
#include "qset/extremality.hpp"
#include "qset/flat_witness.hpp"
#include "qset/oracles.hpp"
#include "qset/realization.hpp"
#include "qset/selftest.hpp"
#include "qset/steering.hpp"

namespace qset {

using nlohmann::json;

json to_json(const Behavior& p);
Behavior behavior_from_json(const json& j);

json to_json(const QubitRealization& r);
QubitRealization realization_from_json(const json& j);

json to_json(const SymmetryElement& g);
json to_json(const SteeredCorrelators& s);
json to_json(const Classification& c);
json to_json(const Reconstruction& r);
json to_json(const SelftestCertificate& c);
json to_json(const FlatnessWitness& w);
json to_json(const LocalLpResult& r);
json to_json(const BellMaxResult& r);
json to_json(const DecompositionResult& r);

}  // namespace qset
