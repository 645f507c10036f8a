#include "folia/json_io.hpp"

#include <fstream>

#include "folia/errors.hpp"

namespace folia {

Json json_of(const RatVec& v) {
    Json arr = Json::array();
    for (const auto& q : v) arr.push_back(q.get_str());
    return arr;
}

Json json_of(const Eigen::VectorXd& v) {
    Json arr = Json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Json json_of(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Json json_of(const GroupoidElement& g) {
    Json j;
    if (g.is_pair()) {
        j["kind"] = "pair";
        j["target"] = json_of(g.as_pair().target);
        j["source"] = json_of(g.as_pair().source);
    } else if (g.is_group()) {
        j["kind"] = "group";
        j["matrix"] = json_of(g.as_group().matrix);
    } else {
        j["kind"] = "action";
        j["matrix"] = json_of(g.as_action().matrix);
        j["base"] = json_of(g.as_action().base);
    }
    return j;
}

Json json_of(const FiberReport& r, const SingularSubalgebroid& B) {
    Json j;
    j["schema"] = "folia/dims/1";
    j["point"] = json_of(r.point);
    j["dim_ev"] = r.dim_ev;
    j["dim_fiber"] = r.dim_fiber;
    j["dim_isotropy"] = r.dim_isotropy;
    Json sc = Json::array();
    for (const auto& [i, jj, k, c] : r.structure_constants)
        sc.push_back(Json::array({i, jj, k, c.get_str()}));
    j["structure_constants"] = sc;
    Json basis = Json::array();
    const auto& amb = B.ambient();
    for (const auto& e : r.isotropy_basis)
        basis.push_back(e.to_string(amb.var_names(), amb.frame_names()));
    j["isotropy_basis"] = basis;
    Json verdicts;
    verdicts["ses_identity"] = (r.dim_fiber == r.dim_ev + r.dim_isotropy);
    verdicts["jacobi"] = r.jacobi_ok;
    j["verdicts"] = verdicts;
    return j;
}

Json json_of(const ProjectivityReport& r) {
    Json j;
    j["schema"] = "folia/proj/1";
    Json pts = Json::array();
    for (const auto& p : r.points) pts.push_back(json_of(p));
    j["points"] = pts;
    j["dims"] = r.dims;
    j["sampled"] = true;
    if (r.verdict == ProjectivityReport::Verdict::Projective) {
        j["verdict"] = "projective";
        j["rank"] = r.rank;
    } else {
        j["verdict"] = "non-projective";
        j["witness"] = Json::array({r.witness_a, r.witness_b});
    }
    j["smoothness_verdict"] = r.smoothness_verdict;
    return j;
}

Json json_of(const LeafRankReport& r) {
    Json j;
    j["schema"] = "folia/leafrank/1";
    j["sampled"] = true;  // constant-rank claims are probed, not proven
    j["ev_constant"] = r.ev_constant;
    j["fiber_constant"] = r.fiber_constant;
    j["rank_BL"] = r.rank_BL;
    j["rank_fiberwise"] = r.rank_fiberwise;
    if (!r.consistent()) j["offending_pair"] = Json::array({r.offending_a, r.offending_b});
    Json dims = Json::array();
    for (const auto& s : r.samples)
        dims.push_back(Json({{"point", json_of(s.point)},
                             {"dim_ev", s.dim_ev},
                             {"dim_fiber", s.dim_fiber},
                             {"dim_isotropy", s.dim_isotropy}}));
    j["samples"] = dims;
    return j;
}

Json json_of(const LeafPath& p) {
    Json j;
    j["schema"] = "folia/path/1";
    j["start"] = json_of(p.start);
    j["end"] = json_of(p.end);
    j["deviation"] = p.deviation;
    Json segs = Json::array();
    for (const auto& s : p.segments)
        segs.push_back(Json({{"generator", s.generator}, {"duration", s.duration}}));
    j["segments"] = segs;
    return j;
}

Json json_of(const SameLeafResult& r) {
    Json j;
    j["schema"] = "folia/leaf/1";
    j["verdict"] = r.yes ? "yes" : "unknown";
    j["expanded"] = r.expanded;
    if (r.yes) j["path"] = json_of(r.path);
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    return j;
}

Json json_of(const GraphCompareReport& r) {
    Json j;
    j["schema"] = "folia/grapheq/1";
    j["agreements"] = r.agreements;
    j["disagreements"] = r.disagreements;
    j["both_unknown"] = r.both_unknown;
    Json dis = Json::array();
    for (const auto& e : r.entries)
        if (e.disagree())
            dis.push_back(Json({{"p", json_of(e.p)},
                                {"q", json_of(e.q)},
                                {"first", e.yes1 ? "yes" : "unknown"},
                                {"second", e.yes2 ? "yes" : "unknown"}}));
    j["disagreement_pairs"] = dis;
    return j;
}

Json json_of(const SubgroupReport& r) {
    Json j;
    j["schema"] = "folia/integrate/1";
    Json basis = Json::array();
    for (const auto& v : r.basis) basis.push_back(json_of(v));
    j["basis"] = basis;
    j["kernel_found"] = r.kernel_found;
    Json hits = Json::array();
    for (const auto& h : r.kernel)
        hits.push_back(Json(
            {{"direction", h.direction}, {"lambda", h.lambda}, {"distance", h.distance}}));
    j["kernel"] = hits;
    if (std::isfinite(r.injectivity_radius)) j["injectivity_radius"] = r.injectivity_radius;
    j["min_recurrence"] = r.min_recurrence;
    j["min_recurrence_lambda"] = r.min_recurrence_lambda;
    j["closure_flag"] = r.closure_flag;
    return j;
}

Json json_of(const DifferentiationResult& r, const SingularSubalgebroid& B) {
    Json j;
    j["schema"] = "folia/differentiate/1";
    const auto& amb = B.ambient();
    j["section"] = r.section.to_string(amb.var_names(), amb.frame_names());
    Json gs = Json::array();
    std::vector<std::string> vars = amb.var_names();
    for (const auto& g : r.coefficient_derivatives) gs.push_back(g.to_string(vars));
    j["coefficient_derivatives"] = gs;
    j["member"] = r.member;
    j["max_deviation"] = r.max_deviation;
    return j;
}

Json json_of(const RecoveryReport& r) {
    Json j;
    j["schema"] = "folia/recover/1";
    Json per = Json::array();
    for (const auto& g : r.per_generator)
        per.push_back(Json({{"generator", g.index}, {"max_deviation", g.max_deviation}}));
    j["per_generator"] = per;
    j["max_deviation"] = r.max_deviation;
    return j;
}

Json json_of(const OpennessReport& r) {
    Json j;
    j["schema"] = "folia/openness/1";
    j["pass"] = r.pass();
    j["saturation_matches"] = r.saturation_matches;
    j["witness_holds"] = r.witness_holds;
    j["degenerate"] = r.degenerate;
    j["samples_checked"] = r.samples_checked;
    j["detail"] = r.detail;
    return j;
}

Json json_of(const GroupLawReport& r) {
    Json j;
    j["schema"] = "folia/grouplaw/1";
    j["max_deviation"] = r.max_deviation;
    j["samples"] = r.samples;
    return j;
}

Json json_of(const KappaCheck& r) {
    Json j;
    j["schema"] = "folia/kappa/1";
    j["max_deviation"] = r.max_dev;
    j["samples"] = r.samples;
    return j;
}

Json json_of(const AlmostInjectivityReport& r) {
    Json j;
    j["schema"] = "folia/injectivity/1";
    j["pass"] = r.pass();
    j["redundant_chart"] = r.redundant_chart;
    Json sols = Json::array();
    for (const auto& s : r.identity_solutions)
        sols.push_back(Json({{"lambda", json_of(s.lambda)}, {"deviation", s.deviation}}));
    j["identity_solutions"] = sols;
    if (std::isfinite(r.injectivity_radius)) j["injectivity_radius"] = r.injectivity_radius;
    return j;
}

Json json_of(const Atlas& atlas, int samples_per_chart, unsigned seed) {
    Json charts = Json::array();
    std::mt19937_64 rng(seed);
    for (const auto& c : atlas.charts) {
        Json jc;
        jc["provenance"] = c.provenance;
        jc["k"] = c.param_dim;
        jc["box"] = Json({{"lo", json_of(c.param_box.lo)}, {"hi", json_of(c.param_box.hi)}});
        Json table = Json::array();
        for (int s = 0; s < samples_per_chart; ++s) {
            Eigen::VectorXd u = c.param_box.sample(rng);
            // shrink toward the center so compositions stay evaluable
            u = 0.25 * (u - 0.5 * (c.param_box.lo + c.param_box.hi)) +
                0.5 * (c.param_box.lo + c.param_box.hi);
            try {
                table.push_back(Json({{"params", json_of(u)}, {"phi", json_of(c.eval(u))}}));
            } catch (const std::exception&) {
                // escaped samples are skipped; the table records evaluable ones
            }
        }
        jc["samples"] = table;
        charts.push_back(jc);
    }
    Json j;
    j["schema"] = "folia/atlas/1";
    j["depth"] = atlas.depth;
    j["charts"] = charts;
    return j;
}

std::string dump_json(const Json& j) {
    return j.dump(2) + "\n";
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << dump_json(j);
}

}  // namespace folia
