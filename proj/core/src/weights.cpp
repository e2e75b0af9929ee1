#include "tango/weights.hpp"

#include "tango/linebundle.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tango {

namespace {

void check_index(int n, WedgeIndex idx) {
    if (!(0 <= idx.p && idx.p < idx.q && idx.q <= n))
        throw std::invalid_argument("WedgeIndex out of range");
}

Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rat(num, den);
}

std::string render_rational(const Rat& r) {
    std::ostringstream os;
    if (boost::multiprecision::denominator(r) == 1)
        os << boost::multiprecision::numerator(r);
    else
        os << r;
    return os.str();
}

} // namespace

void GradedWedgeVector::set(WedgeIndex idx, Rat c) {
    check_index(n, idx);
    if (c == 0)
        coeffs.erase(idx);
    else
        coeffs[idx] = std::move(c);
}

bool GradedWedgeVector::homogeneous_of_grade(int k) const {
    for (const auto& [idx, c] : coeffs)
        if (idx.grade() != k) return false;
    return true;
}

std::optional<int> GradedWedgeVector::grade() const {
    std::optional<int> g;
    for (const auto& [idx, c] : coeffs) {
        if (!g)
            g = idx.grade();
        else if (*g != idx.grade())
            return std::nullopt;
    }
    return g;
}

long weight_of_monomial(const TangoParams& params, int p) {
    if (p < 0 || p > params.n)
        throw std::invalid_argument("weight_of_monomial: p outside 0..n");
    return static_cast<long>(params.n) * params.alpha + p * (params.beta - params.alpha);
}

int grade_dim(int n, int k) {
    if (k < 1 || k > 2 * n - 1)
        throw std::invalid_argument("grade_dim: k outside 1..2n-1");
    return (k - 1) / 2 - std::max(k - n, 0) + 1;
}

std::vector<WedgeIndex> grade_basis(int n, int k) {
    if (k < 1 || k > 2 * n - 1)
        throw std::invalid_argument("grade_basis: k outside 1..2n-1");
    std::vector<WedgeIndex> basis;
    for (int p = std::max(k - n, 0); 2 * p < k; ++p)
        basis.push_back(WedgeIndex{p, k - p});
    return basis;
}

std::map<std::pair<WedgeIndex, WedgeIndex>, Rat>
wedge_square(const GradedWedgeVector& v) {
    auto g = v.grade();
    if (!g && !v.coeffs.empty())
        throw std::invalid_argument("wedge_square: mixed-grade input");
    std::map<std::pair<WedgeIndex, WedgeIndex>, Rat> out;
    for (auto a = v.coeffs.begin(); a != v.coeffs.end(); ++a)
        for (auto b = std::next(a); b != v.coeffs.end(); ++b) {
            Rat c = 2 * a->second * b->second;
            if (c != 0) out[{a->first, b->first}] = std::move(c);
        }
    return out;
}

std::map<std::array<int, 4>, Rat>
wedge_square_mixed(const GradedWedgeVector& v) {
    std::map<std::array<int, 4>, Rat> out;
    auto add_term = [&out](WedgeIndex a, WedgeIndex b, const Rat& c) {
        std::array<int, 4> idx{a.p, a.q, b.p, b.q};
        // Sort the four wedge factors, tracking the permutation sign;
        // repeated factors kill the term.
        int sign = 1;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j + 1 < 4 - i; ++j)
                if (idx[j] > idx[j + 1]) {
                    std::swap(idx[j], idx[j + 1]);
                    sign = -sign;
                }
        for (int i = 0; i + 1 < 4; ++i)
            if (idx[i] == idx[i + 1]) return;
        auto it = out.find(idx);
        Rat add = sign > 0 ? c : -c;
        if (it == out.end()) {
            out[idx] = std::move(add);
        } else {
            it->second += add;
            if (it->second == 0) out.erase(it);
        }
    };
    for (auto a = v.coeffs.begin(); a != v.coeffs.end(); ++a)
        for (auto b = std::next(a); b != v.coeffs.end(); ++b)
            add_term(a->first, b->first, 2 * a->second * b->second);
    return out;
}

bool is_decomposable_homogeneous(const GradedWedgeVector& v) {
    if (!v.grade() && !v.coeffs.empty())
        throw std::invalid_argument("is_decomposable_homogeneous: mixed-grade input");
    return v.coeffs.size() <= 1;
}

WSpaceReport wspace_validate(const WSpace& w) {
    WSpaceReport report;
    const int n = w.n;
    if (n <= 2) throw std::invalid_argument("wspace_validate: n <= 2");
    for (const auto& [k, phi] : w.functionals) {
        if (k < 3 || k > 2 * n - 3)
            throw std::invalid_argument("wspace_validate: grade " + std::to_string(k) +
                                        " outside 3..2n-3");
        if (phi.size() != static_cast<size_t>(grade_dim(n, k)))
            throw std::invalid_argument("wspace_validate: functional length mismatch at grade " +
                                        std::to_string(k));
    }

    Int dim = 0;
    bool hyperplanes_ok = true;
    for (int k = 3; k <= 2 * n - 3; ++k) {
        auto it = w.functionals.find(k);
        if (it == w.functionals.end()) {
            report.failures.push_back("missing functional at grade " + std::to_string(k));
            hyperplanes_ok = false;
            continue;
        }
        dim += grade_dim(n, k) - 1;
        auto basis = grade_basis(n, k);
        for (size_t j = 0; j < basis.size(); ++j) {
            if (it->second[j] == 0) {
                report.failures.push_back("grade " + std::to_string(k) +
                                          " hyperplane contains decomposable z_{" +
                                          std::to_string(basis[j].p) + "," +
                                          std::to_string(basis[j].q) + "}");
                hyperplanes_ok = false;
            }
        }
    }
    report.dim_w = dim;
    Int expected = binom(n + 1, 2) - (2 * n - 1);
    report.dimension_ok =
        dim == expected &&
        w.functionals.size() == static_cast<size_t>(std::max(2 * n - 5, 0));
    if (!report.dimension_ok)
        report.failures.push_back("dim W != C(n+1,2) - (2n-1)");
    report.hyperplanes_ok = hyperplanes_ok;
    report.in_family = report.dimension_ok && report.hyperplanes_ok;
    return report;
}

namespace {

// Spanning set of W_k = ker(phi_k): c_{j+1} e_j - c_j e_{j+1} over
// consecutive coordinates of phi = (c_0..c_{m-1}).
std::vector<GradedWedgeVector> kernel_basis(int n, int k, const std::vector<Rat>& phi) {
    auto basis = grade_basis(n, k);
    std::vector<GradedWedgeVector> out;
    for (size_t j = 0; j + 1 < basis.size(); ++j) {
        GradedWedgeVector v;
        v.n = n;
        v.set(basis[j], phi[j + 1]);
        v.set(basis[j + 1], -phi[j]);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

NoDecomposableEvidence wspace_no_decomposable_check(const WSpace& w, long trials,
                                                    std::uint64_t seed) {
    NoDecomposableEvidence evidence;
    evidence.trials = trials;
    evidence.seed = seed;
    const int n = w.n;

    // Structural: a decomposable element of W_k is a multiple of a basis
    // vector z_{p,k-p}, which lies in ker(phi_k) only if the matching
    // coordinate of phi_k vanishes.
    evidence.structural_ok = true;
    for (const auto& [k, phi] : w.functionals) {
        auto basis = grade_basis(n, k);
        for (size_t j = 0; j < basis.size(); ++j)
            if (phi[j] == 0) {
                evidence.structural_ok = false;
                evidence.failures.push_back("decomposable generator z_{" +
                                            std::to_string(basis[j].p) + "," +
                                            std::to_string(basis[j].q) + "} in grade " +
                                            std::to_string(k));
            }
    }

    // Randomized: mixed-grade samples of W must all have nonzero wedge square.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    evidence.randomized_ok = true;
    for (long t = 0; t < trials; ++t) {
        GradedWedgeVector sample;
        sample.n = n;
        for (const auto& [k, phi] : w.functionals) {
            for (const auto& kv : kernel_basis(n, k, phi)) {
                Rat c(num(rng), den(rng));
                if (c == 0) continue;
                for (const auto& [idx, coeff] : kv.coeffs) {
                    Rat cur = sample.coeffs.count(idx) ? sample.coeffs[idx] : Rat(0);
                    sample.set(idx, cur + c * coeff);
                }
            }
        }
        if (sample.coeffs.empty()) continue; // zero sample carries no evidence
        if (wedge_square_mixed(sample).empty()) {
            evidence.randomized_ok = false;
            evidence.failures.push_back("sampled vector with zero wedge square at trial " +
                                        std::to_string(t));
        }
    }
    return evidence;
}

DWBasis build_dw(const WSpace& w) {
    const int n = w.n;
    DWBasis dw;
    dw.n = n;
    for (int k = 1; k <= 2 * n - 1; ++k) {
        auto basis = grade_basis(n, k);
        // Smallest-p pick; in the hyperplane grades this is legal because a
        // validated functional is nonzero on every basis vector.
        dw.picks[k] = basis.front();
    }
    return dw;
}

std::vector<long> clebsch_gordan_wedge2(int n) {
    if (n < 1) throw std::invalid_argument("clebsch_gordan_wedge2: n < 1");
    std::vector<long> labels;
    for (long label = 2 * (n - 1); label >= 0; label -= 4)
        labels.push_back(label);
    return labels;
}

WSpace sample_wspace(int n, std::uint64_t seed) {
    if (n <= 2) throw std::invalid_argument("sample_wspace: n <= 2");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> sign(0, 1);
    WSpace w;
    w.n = n;
    for (int k = 3; k <= 2 * n - 3; ++k) {
        std::vector<Rat> phi;
        for (int j = 0; j < grade_dim(n, k); ++j) {
            Rat c(num(rng), den(rng));
            phi.push_back(sign(rng) ? c : -c);
        }
        w.functionals[k] = std::move(phi);
    }
    return w;
}

std::string wspace_to_json(const WSpace& w) {
    nlohmann::json j;
    j["n"] = w.n;
    nlohmann::json fs = nlohmann::json::object();
    for (const auto& [k, phi] : w.functionals) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : phi) arr.push_back(render_rational(c));
        fs[std::to_string(k)] = std::move(arr);
    }
    j["functionals"] = std::move(fs);
    return j.dump();
}

WSpace wspace_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    WSpace w;
    w.n = j.at("n").get<int>();
    for (const auto& [key, arr] : j.at("functionals").items()) {
        std::vector<Rat> phi;
        for (const auto& item : arr) phi.push_back(parse_rational(item.get<std::string>()));
        w.functionals[std::stoi(key)] = std::move(phi);
    }
    return w;
}

} // namespace tango
