#include "folia/geometry.hpp"

#include <algorithm>

#include "folia/errors.hpp"

namespace folia {

namespace {

RatVec flatten(const RatMat& m) {
    RatVec v;
    for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
    return v;
}

RatMat J2() {
    RatMat m = rat_mat(2, 2);
    m[0][1] = -1;
    m[1][0] = 1;
    return m;
}

std::vector<RatMat> so3_generators() {
    RatMat j1 = rat_mat(3, 3), j2 = rat_mat(3, 3), j3 = rat_mat(3, 3);
    j1[1][2] = -1;
    j1[2][1] = 1;
    j2[0][2] = 1;
    j2[2][0] = -1;
    j3[0][1] = -1;
    j3[1][0] = 1;
    return {j1, j2, j3};
}

// su(2) ~ sp(1): left multiplication by i, j, k on the quaternions
std::vector<RatMat> su2_generators() {
    auto make = [](std::initializer_list<std::initializer_list<long>> rows) {
        RatMat m;
        for (auto& r : rows) {
            RatVec row;
            for (long v : r) row.push_back(Rat(v));
            m.push_back(row);
        }
        return m;
    };
    RatMat li = make({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}});
    RatMat lj = make({{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}});
    RatMat lk = make({{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}});
    return {li, lj, lk};
}

std::vector<RatMat> gl2_generators() {
    std::vector<RatMat> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            RatMat e = rat_mat(2, 2);
            e[i][j] = 1;
            out.push_back(e);
        }
    return out;
}

std::vector<RatMat> t2_generators() {
    RatMat b1 = rat_mat(4, 4), b2 = rat_mat(4, 4);
    b1[0][1] = -1;
    b1[1][0] = 1;
    b2[2][3] = -1;
    b2[3][2] = 1;
    return {b1, b2};
}

std::vector<std::string> default_vars(int n) {
    static const char* names[] = {"x", "y", "z", "w"};
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i)
        out.push_back(i < 4 ? names[i] : "x" + std::to_string(i + 1));
    return out;
}

}  // namespace

AmbientAlgebroid AmbientAlgebroid::tangent(std::vector<std::string> var_names) {
    AmbientAlgebroid a;
    a.kind_ = AmbientKind::Tangent;
    a.name_ = "tangent";
    a.var_names_ = std::move(var_names);
    return a;
}

AmbientAlgebroid AmbientAlgebroid::lie_algebra(std::string name, std::vector<RatMat> realization) {
    if (realization.empty()) throw InputError("Lie algebra needs at least one matrix");
    AmbientAlgebroid a;
    a.kind_ = AmbientKind::LieAlgebra;
    a.name_ = std::move(name);
    a.realization_ = std::move(realization);
    a.derive_structure_constants(false);
    a.check_jacobi();
    return a;
}

AmbientAlgebroid AmbientAlgebroid::linear_action(std::string name, std::vector<RatMat> realization,
                                                 std::vector<std::string> var_names) {
    if (realization.empty()) throw InputError("action algebroid needs at least one matrix");
    AmbientAlgebroid a;
    a.kind_ = AmbientKind::LinearAction;
    a.name_ = std::move(name);
    a.realization_ = std::move(realization);
    a.var_names_ = std::move(var_names);
    const std::size_t d = a.var_names_.size();
    for (const auto& m : a.realization_)
        if (m.size() != d || m[0].size() != d)
            throw InputError("action matrices must be d x d with d = number of variables");
    a.derive_structure_constants(true);
    a.check_jacobi();
    return a;
}

AmbientAlgebroid AmbientAlgebroid::named(AmbientKind kind, const std::string& name) {
    if (kind == AmbientKind::LieAlgebra) {
        if (name == "so2") return lie_algebra(name, {J2()});
        if (name == "so3") return lie_algebra(name, so3_generators());
        if (name == "su2") return lie_algebra(name, su2_generators());
        if (name == "gl2") return lie_algebra(name, gl2_generators());
        if (name == "t2") return lie_algebra(name, t2_generators());
        throw InputError("unknown Lie algebra '" + name + "'");
    }
    if (kind == AmbientKind::LinearAction) {
        if (name == "so2") return linear_action(name, {J2()}, default_vars(2));
        if (name == "so3") return linear_action(name, so3_generators(), default_vars(3));
        if (name == "gl2") return linear_action(name, gl2_generators(), default_vars(2));
        throw InputError("unknown action algebra '" + name + "'");
    }
    throw InputError("named() expects a matrix kind");
}

int AmbientAlgebroid::rank() const {
    return kind_ == AmbientKind::Tangent ? nvars() : static_cast<int>(realization_.size());
}

int AmbientAlgebroid::matrix_dim() const {
    return realization_.empty() ? 0 : static_cast<int>(realization_[0].size());
}

std::vector<std::string> AmbientAlgebroid::frame_names() const {
    std::vector<std::string> out;
    if (kind_ == AmbientKind::Tangent) {
        for (const auto& v : var_names_) out.push_back("d" + v);
    } else {
        for (int a = 0; a < rank(); ++a) out.push_back("e" + std::to_string(a + 1));
    }
    return out;
}

void AmbientAlgebroid::derive_structure_constants(bool action_orientation) {
    const int r = static_cast<int>(realization_.size());
    std::vector<RatVec> basis;
    for (const auto& m : realization_) basis.push_back(flatten(m));
    {
        RatMat probe;
        for (const auto& v : basis) probe.push_back(v);
        if (folia::rank(probe) != r) throw InputError("realization matrices are linearly dependent");
    }
    structure_.assign(r, std::vector<RatVec>(r, RatVec(r, Rat(0))));
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            if (a == b) continue;
            // the anchor rho(e_a) = A_a x intertwines brackets only for [e_a,e_b] = A_b A_a - A_a A_b;
            // for an algebra over a point we keep the plain matrix commutator
            RatMat comm = action_orientation ? rat_commutator(realization_[b], realization_[a])
                                             : rat_commutator(realization_[a], realization_[b]);
            RatVec coeffs;
            if (!expand_in_span(basis, flatten(comm), coeffs))
                throw InputError("realization matrices are not closed under the commutator");
            structure_[a][b] = coeffs;
        }
}

void AmbientAlgebroid::check_jacobi() const {
    const int r = rank();
    auto c = [&](int a, int b, int k) -> Rat {
        return structure_.empty() ? Rat(0) : structure_[a][b][k];
    };
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int k = 0; k < r; ++k)
                if (c(a, b, k) != -c(b, a, k)) throw InputError("structure constants not antisymmetric");
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b)
            for (int d = b + 1; d < r; ++d)
                for (int m = 0; m < r; ++m) {
                    Rat acc(0);
                    for (int k = 0; k < r; ++k)
                        acc += c(a, b, k) * c(k, d, m) + c(b, d, k) * c(k, a, m) +
                               c(d, a, k) * c(k, b, m);
                    if (acc != 0) throw InputError("structure constants violate Jacobi");
                }
}

const Rat& AmbientAlgebroid::structure_constant(int a, int b, int k) const {
    static const Rat zero(0);
    if (structure_.empty()) return zero;
    return structure_[a][b][k];
}

std::vector<Poly> AmbientAlgebroid::anchor_of_frame(int a) const {
    const int n = nvars();
    std::vector<Poly> field(n, Poly(n));
    if (kind_ == AmbientKind::Tangent) {
        field[a] = Poly::constant(n, Rat(1));
        return field;
    }
    if (kind_ == AmbientKind::LieAlgebra) return field;  // anchor is zero over a point
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (realization_[a][i][j] != 0)
                field[i] += Poly::variable(n, j) * realization_[a][i][j];
    return field;
}

std::vector<Poly> AmbientAlgebroid::anchor_field(const FreeModuleElem& section) const {
    if (section.rank() != rank()) throw InputError("anchor: section rank mismatch");
    const int n = nvars();
    std::vector<Poly> field(n, Poly(n));
    for (int a = 0; a < rank(); ++a) {
        if (section[a].is_zero()) continue;
        std::vector<Poly> fa = anchor_of_frame(a);
        for (int i = 0; i < n; ++i) field[i] += section[a] * fa[i];
    }
    return field;
}

FreeModuleElem AmbientAlgebroid::bracket(const FreeModuleElem& a, const FreeModuleElem& b) const {
    const int r = rank();
    const int n = nvars();
    if (a.rank() != r || b.rank() != r) throw InputError("bracket: rank mismatch with ambient");
    FreeModuleElem out(r, n);
    if (kind_ == AmbientKind::Tangent) {
        for (int k = 0; k < r; ++k) {
            Poly acc(n);
            for (int i = 0; i < n; ++i)
                acc += a[i] * b[k].derivative(i) - b[i] * a[k].derivative(i);
            out[k] = std::move(acc);
        }
        return out;
    }
    // matrix kinds: [f e_a, g e_b] = f g c^k_ab e_k + f (rho(e_a) g) e_b - g (rho(e_b) f) e_a
    std::vector<std::vector<Poly>> anchors(r);
    for (int i = 0; i < r; ++i) anchors[i] = anchor_of_frame(i);
    auto apply_anchor = [&](int frame, const Poly& g) {
        Poly acc(n);
        for (int i = 0; i < n; ++i) acc += anchors[frame][i] * g.derivative(i);
        return acc;
    };
    for (int ia = 0; ia < r; ++ia) {
        if (a[ia].is_zero()) continue;
        for (int ib = 0; ib < r; ++ib) {
            if (!b[ib].is_zero()) {
                Poly fg = a[ia] * b[ib];
                for (int k = 0; k < r; ++k) {
                    const Rat& c = structure_constant(ia, ib, k);
                    if (c != 0) out[k] += fg * c;
                }
            }
        }
    }
    if (kind_ == AmbientKind::LinearAction) {
        for (int ia = 0; ia < r; ++ia)
            for (int ib = 0; ib < r; ++ib) {
                if (!a[ia].is_zero() && !b[ib].is_zero()) {
                    out[ib] += a[ia] * apply_anchor(ia, b[ib]);
                    out[ia] -= b[ib] * apply_anchor(ib, a[ia]);
                }
            }
    }
    return out;
}

RatMat AmbientAlgebroid::realize(const RatVec& frame_coeffs) const {
    if (realization_.empty()) throw InputError("realize: tangent ambient has no matrix realization");
    if (static_cast<int>(frame_coeffs.size()) != rank()) throw InputError("realize: coefficient count");
    RatMat acc = rat_mat(matrix_dim(), matrix_dim());
    for (int a = 0; a < rank(); ++a)
        acc = rat_mat_add(acc, rat_mat_scale(realization_[a], frame_coeffs[a]));
    return acc;
}

bool AmbientAlgebroid::operator==(const AmbientAlgebroid& rhs) const {
    return kind_ == rhs.kind_ && var_names_ == rhs.var_names_ && realization_ == rhs.realization_;
}

SingularSubalgebroid::SingularSubalgebroid(AmbientAlgebroid ambient,
                                           std::vector<FreeModuleElem> generators,
                                           GroebnerOptions opts)
    : ambient_(std::move(ambient)) {
    for (const auto& g : generators) {
        if (g.rank() != ambient_.rank())
            throw InputError("generator rank does not match the ambient frame");
        if (g.nvars() != ambient_.nvars())
            throw InputError("generator variable count does not match the ambient base");
    }
    module_ = SubmoduleData::compute(std::move(generators), opts);
}

const Involutivity& SingularSubalgebroid::check_involutive() const {
    if (involutivity_.state != Involutivity::State::Unchecked) return involutivity_;
    const auto& gens = module_.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j < gens.size(); ++j) {
            FreeModuleElem br = ambient_.bracket(gens[i], gens[j]);
            if (br.is_zero()) continue;
            if (!module_.contains(br)) {
                involutivity_.state = Involutivity::State::Refuted;
                involutivity_.witness_i = static_cast<int>(i);
                involutivity_.witness_j = static_cast<int>(j);
                involutivity_.witness_bracket = std::move(br);
                return involutivity_;
            }
        }
    involutivity_.state = Involutivity::State::Verified;
    return involutivity_;
}

SingularSubalgebroid subalgebroid_over_submanifold(const AmbientAlgebroid& ambient,
                                                   int submanifold_dim, int subframe_rank,
                                                   GroebnerOptions opts) {
    const int m = ambient.nvars();
    const int r = ambient.rank();
    if (submanifold_dim < 0 || submanifold_dim > m) throw InputError("submanifold dimension out of range");
    if (subframe_rank < 0 || subframe_rank > r) throw InputError("subframe rank out of range");
    std::vector<FreeModuleElem> gens;
    for (int j = 0; j < subframe_rank; ++j) gens.push_back(FreeModuleElem::unit(r, m, j));
    for (int j = subframe_rank; j < r; ++j)
        for (int i = submanifold_dim; i < m; ++i) {
            FreeModuleElem e = FreeModuleElem::unit(r, m, j);
            e *= Poly::variable(m, i);
            gens.push_back(std::move(e));
        }
    if (gens.empty()) gens.push_back(FreeModuleElem(r, m));  // N = M with empty frame: zero module
    return SingularSubalgebroid(ambient, std::move(gens), opts);
}

SingularSubalgebroid induced_foliation(const SingularSubalgebroid& B, GroebnerOptions opts) {
    const AmbientAlgebroid& amb = B.ambient();
    std::vector<std::string> vars = amb.var_names();
    AmbientAlgebroid tangent = AmbientAlgebroid::tangent(vars);
    std::vector<FreeModuleElem> gens;
    for (const auto& g : B.generators()) {
        std::vector<Poly> field = amb.anchor_field(g);
        gens.push_back(field.empty() ? FreeModuleElem(0, 0) : FreeModuleElem(std::move(field)));
    }
    if (gens.empty()) gens.push_back(FreeModuleElem(amb.nvars(), amb.nvars()));
    SingularSubalgebroid out(tangent, std::move(gens), opts);
    out.check_involutive();  // anchors of an involutive module close under brackets
    return out;
}

}  // namespace folia
