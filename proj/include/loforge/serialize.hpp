#pragma once

// JSON forms of the domain types. Rationals travel as "num/den" strings and
// index sets as sorted 0-based arrays.

#include "json.hpp"
#include "loforge/fourier.hpp"
#include "loforge/inverse_lo.hpp"
#include "loforge/matrix_lab.hpp"
#include "loforge/walk.hpp"

namespace loforge {

nlohmann::json to_json(const ZpVector& v);
ZpVector vector_from_json(const nlohmann::json& j);

/// {p, mu, mode, length, probabilities}; exact probabilities are "num/den".
nlohmann::json to_json(const WalkDistribution& d);
WalkDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Probability& p);
nlohmann::json to_json(const GreedyDecomposition& g);
nlohmann::json to_json(const IteratedDecomposition& it);
nlohmann::json to_json(const InverseLOCertificate& c);
nlohmann::json to_json(const Signature& s);
nlohmann::json to_json(const SignatureResult& s);
nlohmann::json to_json(const LevelSetPair& pair);
nlohmann::json to_json(const CensusResult& c);
nlohmann::json to_json(const MonteCarloEstimate& m);
nlohmann::json to_json(const ExactQResult& q);
nlohmann::json to_json(const FiberCensus& f);

}  // namespace loforge
