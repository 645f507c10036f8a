#pragma once

#include <json.hpp>

#include "folia/diffdiff.hpp"
#include "folia/graph.hpp"
#include "folia/pointwise.hpp"

namespace folia {

using Json = nlohmann::json;

Json json_of(const RatVec& v);             // rationals as exact strings
Json json_of(const Eigen::VectorXd& v);
Json json_of(const Eigen::MatrixXd& m);
Json json_of(const GroupoidElement& g);
Json json_of(const FiberReport& r, const SingularSubalgebroid& B);
Json json_of(const ProjectivityReport& r);
Json json_of(const LeafRankReport& r);
Json json_of(const LeafPath& p);
Json json_of(const SameLeafResult& r);
Json json_of(const GraphCompareReport& r);
Json json_of(const SubgroupReport& r);
Json json_of(const DifferentiationResult& r, const SingularSubalgebroid& B);
Json json_of(const RecoveryReport& r);
Json json_of(const OpennessReport& r);
Json json_of(const GroupLawReport& r);
Json json_of(const KappaCheck& r);
Json json_of(const AlmostInjectivityReport& r);
/// Atlas dump: provenance, parameter count, box, and a sample table of (params, Phi(params)).
Json json_of(const Atlas& atlas, int samples_per_chart, unsigned seed);

/// Serializes with sorted keys and a trailing newline; byte-stable for identical inputs.
std::string dump_json(const Json& j);
void write_json(const Json& j, const std::string& path);

}  // namespace folia
