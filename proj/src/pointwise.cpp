#include "folia/pointwise.hpp"

#include "folia/errors.hpp"
#include "folia/parallel.hpp"

namespace folia {

namespace {

// rows s(x) for the syzygy generators; relations among the generator classes in the fiber
RatMat syzygy_evaluations(const SubmoduleData& mod, const RatVec& x) {
    RatMat rows;
    for (const auto& s : mod.syzygies()) {
        RatVec row;
        row.reserve(s.size());
        for (const auto& p : s) row.push_back(p.evaluate(x));
        rows.push_back(std::move(row));
    }
    return rows;
}

// columns are the evaluated generators: entry [component][i] = g_i(x)[component]
RatMat evaluation_matrix(const SubmoduleData& mod, const RatVec& x) {
    const int k = mod.generator_count();
    const int r = mod.rank();
    RatMat m = rat_mat(r, k);
    for (int i = 0; i < k; ++i) {
        RatVec v = mod.generators()[i].evaluate(x);
        for (int c = 0; c < r; ++c) m[c][i] = v[c];
    }
    return m;
}

void check_point(const SingularSubalgebroid& B, const RatVec& x) {
    if (static_cast<int>(x.size()) != B.ambient().nvars())
        throw InputError("point dimension does not match the base");
}

}  // namespace

Rat FiberReport::structure_constant(int i, int j, int k) const {
    for (const auto& [a, b, c, v] : structure_constants) {
        if (a == i && b == j && c == k) return v;
        if (a == j && b == i && c == k) return -v;
    }
    return Rat(0);
}

int fiber_dimension(const SingularSubalgebroid& B, const RatVec& x) {
    check_point(B, x);
    const auto& mod = B.module();
    return mod.generator_count() - rank(syzygy_evaluations(mod, x));
}

FiberReport fiber_report(const SingularSubalgebroid& B, const RatVec& x) {
    check_point(B, x);
    const auto& mod = B.module();
    const int k = mod.generator_count();

    FiberReport rep;
    rep.point = x;

    RatMat W = syzygy_evaluations(mod, x);
    const int rank_W = rank(W);
    rep.dim_fiber = k - rank_W;

    RatMat E = evaluation_matrix(mod, x);
    rep.dim_ev = rank(E);

    // isotropy classes: kernel of the evaluation on class vectors, modulo the syzygy relations
    std::vector<RatVec> ker = kernel_basis(E);
    RatMat accum = W;
    int accum_rank = rank_W;
    for (const auto& c : ker) {
        RatMat probe = accum;
        probe.push_back(c);
        if (rank(probe) > accum_rank) {
            accum.push_back(c);
            ++accum_rank;
            rep.isotropy_classes.push_back(c);
        }
    }
    rep.dim_isotropy = static_cast<int>(rep.isotropy_classes.size());

    const int n = B.ambient().nvars();
    const int r = B.ambient().rank();
    for (const auto& c : rep.isotropy_classes) {
        FreeModuleElem v(r, n);
        for (int i = 0; i < k; ++i)
            if (c[i] != 0) v += c[i] * mod.generators()[i];
        rep.isotropy_basis.push_back(std::move(v));
    }

    // structure constants by bracketing representatives, certifying membership and projecting
    // the certificate class onto the isotropy basis modulo the syzygy relations
    const int m = rep.dim_isotropy;
    if (m > 0) {
        std::vector<RatVec> span;
        for (const auto& w : W) span.push_back(w);
        for (const auto& c : rep.isotropy_classes) span.push_back(c);
        std::vector<std::vector<RatVec>> table(m, std::vector<RatVec>(m, RatVec(m, Rat(0))));
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                FreeModuleElem br =
                    B.ambient().bracket(rep.isotropy_basis[a], rep.isotropy_basis[b]);
                NormalFormResult nf = mod.normal_form(br);
                if (!nf.member())
                    throw InputError("fiber_report requires an involutive module (bracket escaped)");
                RatVec cls(k);
                for (int i = 0; i < k; ++i) cls[i] = nf.certificate[i].evaluate(x);
                RatVec coeffs;
                if (!expand_in_span(span, cls, coeffs))
                    throw InputError("isotropy bracket class failed to project; inconsistent data");
                RatVec lambdas(coeffs.end() - m, coeffs.end());
                table[a][b] = lambdas;
                for (int c2 = 0; c2 < m; ++c2) table[b][a][c2] = -lambdas[c2];
                for (int c2 = 0; c2 < m; ++c2)
                    if (lambdas[c2] != 0)
                        rep.structure_constants.emplace_back(a, b, c2, lambdas[c2]);
            }
        // Jacobi of the projected bracket, exact
        auto cst = [&](int i, int j, int kk) -> Rat {
            if (i == j) return Rat(0);
            return i < j ? table[i][j][kk] : -table[j][i][kk];
        };
        for (int a = 0; a < m && rep.jacobi_ok; ++a)
            for (int b = 0; b < m && rep.jacobi_ok; ++b)
                for (int c2 = 0; c2 < m && rep.jacobi_ok; ++c2)
                    for (int d = 0; d < m; ++d) {
                        Rat acc(0);
                        for (int e = 0; e < m; ++e)
                            acc += cst(a, b, e) * cst(e, c2, d) + cst(b, c2, e) * cst(e, a, d) +
                                   cst(c2, a, e) * cst(e, b, d);
                        if (acc != 0) {
                            rep.jacobi_ok = false;
                            break;
                        }
                    }
    }
    return rep;
}

ProjectivityReport projectivity_scan(const SingularSubalgebroid& B,
                                     const std::vector<RatVec>& points) {
    if (points.empty()) throw InputError("projectivity_scan needs at least one point");
    ProjectivityReport rep;
    rep.points = points;
    rep.dims.resize(points.size());
    parallel_for(points.size(),
                 [&](std::size_t i) { rep.dims[i] = fiber_dimension(B, points[i]); });
    rep.verdict = ProjectivityReport::Verdict::Projective;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (rep.dims[i] != rep.dims[0]) {
            rep.verdict = ProjectivityReport::Verdict::NonProjective;
            rep.witness_a = 0;
            rep.witness_b = static_cast<int>(i);
            break;
        }
    }
    if (rep.verdict == ProjectivityReport::Verdict::Projective) {
        rep.rank = rep.dims[0];
        rep.smoothness_verdict = "H^G(B) is a Lie groupoid with source-fiber dimension " +
                                 std::to_string(rep.rank) + " (sampled verdict)";
    } else {
        rep.smoothness_verdict = "H^G(B) is not smooth: fiber dimension jumps between sampled points";
    }
    return rep;
}

bool LocalGeneratorsReport::pass() const {
    if (!basis_at_base || !global_generation) return false;
    for (const auto& [p, ok] : probe_basis)
        if (!ok) return false;
    return true;
}

namespace {

// candidate classes at a point; false when some candidate is not a member
bool candidate_classes(const SubmoduleData& mod, const std::vector<FreeModuleElem>& candidates,
                       const RatVec& x, std::vector<RatVec>& classes) {
    classes.clear();
    const int k = mod.generator_count();
    for (const auto& e : candidates) {
        NormalFormResult nf = mod.normal_form(e);
        if (!nf.member()) return false;
        RatVec cls(k);
        for (int i = 0; i < k; ++i) cls[i] = nf.certificate[i].evaluate(x);
        classes.push_back(std::move(cls));
    }
    return true;
}

bool classes_form_basis(const SubmoduleData& mod, const std::vector<RatVec>& classes,
                        const RatVec& x) {
    RatMat W = syzygy_evaluations(mod, x);
    const int dim_fiber = mod.generator_count() - rank(W);
    if (static_cast<int>(classes.size()) != dim_fiber) return false;
    RatMat probe = W;
    int base_rank = rank(W);
    for (const auto& c : classes) probe.push_back(c);
    return rank(std::move(probe)) == base_rank + dim_fiber;
}

}  // namespace

LocalGeneratorsReport local_generators_check(const SingularSubalgebroid& B, const RatVec& x,
                                             const std::vector<FreeModuleElem>& candidates,
                                             const std::vector<RatVec>& probes) {
    check_point(B, x);
    if (candidates.empty()) throw InputError("local_generators_check needs candidates");
    const auto& mod = B.module();

    LocalGeneratorsReport rep;
    std::vector<RatVec> classes;
    if (!candidate_classes(mod, candidates, x, classes))
        throw InputError("candidate is not a member of the module");
    rep.basis_at_base = classes_form_basis(mod, classes, x);
    if (!rep.basis_at_base)
        throw InputError("candidate classes do not form a basis of the fiber at the base point");

    // global surrogate for "generators in a neighborhood": exact membership of every original
    // generator in the candidate span
    SubmoduleData span = SubmoduleData::compute(candidates, mod.options());
    rep.global_generation = true;
    for (const auto& g : mod.generators())
        if (!span.contains(g)) {
            rep.global_generation = false;
            rep.detail = "generator escapes the candidate span";
            break;
        }

    for (const auto& p : probes) {
        check_point(B, p);
        std::vector<RatVec> pc;
        bool ok = candidate_classes(mod, candidates, p, pc) && classes_form_basis(mod, pc, p);
        rep.probe_basis.emplace_back(p, ok);
    }
    return rep;
}

LeafRankReport leaf_rank_report(const SingularSubalgebroid& B, const std::vector<RatVec>& samples) {
    if (samples.empty()) throw InputError("leaf_rank_report needs sample points");
    LeafRankReport rep;
    for (const auto& x : samples) rep.samples.push_back(fiber_report(B, x));
    rep.rank_BL = rep.samples[0].dim_ev;
    rep.rank_fiberwise = rep.samples[0].dim_fiber;
    for (std::size_t i = 1; i < rep.samples.size(); ++i) {
        if (rep.samples[i].dim_ev != rep.rank_BL && rep.ev_constant) {
            rep.ev_constant = false;
            rep.offending_a = 0;
            rep.offending_b = static_cast<int>(i);
        }
        if (rep.samples[i].dim_fiber != rep.rank_fiberwise && rep.fiber_constant) {
            rep.fiber_constant = false;
            if (rep.offending_a < 0) {
                rep.offending_a = 0;
                rep.offending_b = static_cast<int>(i);
            }
        }
    }
    return rep;
}

PullbackDimReport pullback_dim_check(const SingularSubalgebroid& B, const RatVec& x,
                                     const RatVec& y) {
    if (B.ambient().kind() != AmbientKind::Tangent)
        throw InputError("pullback_dim_check requires a tangent ambient");
    check_point(B, x);
    check_point(B, y);
    const int n = B.ambient().nvars();
    const auto& mod = B.module();

    // pr1-pullback to the pair groupoid M x M: sections act on the first factor only
    std::vector<int> first_block(n);
    for (int i = 0; i < n; ++i) first_block[i] = i;
    std::vector<FreeModuleElem> ext_gens;
    for (const auto& g : mod.generators()) {
        FreeModuleElem e(2 * n, 2 * n);
        for (int c = 0; c < n; ++c) e[c] = g[c].embed(2 * n, first_block);
        ext_gens.push_back(std::move(e));
    }
    SubmoduleData ext = SubmoduleData::compute(std::move(ext_gens), mod.options());

    RatVec xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    PullbackDimReport rep;
    rep.dim_base = mod.generator_count() - rank(syzygy_evaluations(mod, x));
    rep.dim_pullback = ext.generator_count() - rank(syzygy_evaluations(ext, xy));
    return rep;
}

}  // namespace folia
