#include "tango/expr.hpp"

#include "tango/linebundle.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace tango {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

// Generalized binomial C(x, j) for possibly negative integer x.
Int gen_binom(const Int& x, long j) {
    if (j < 0) return 0;
    Int num = 1;
    for (long i = 0; i < j; ++i) num *= x - i;
    Int den = 1;
    for (long i = 2; i <= j; ++i) den *= i;
    return num / den;
}

} // namespace

ExprPtr line(int n, long d) { return line_sum(n, {d}); }

ExprPtr line_sum(int n, std::vector<long> degrees) {
    Expr e;
    e.kind = ExprKind::LineSum;
    e.params.n = n;
    e.twists = std::move(degrees);
    return make(std::move(e));
}

ExprPtr direct_sum(std::vector<ExprPtr> kids) {
    if (kids.empty()) throw std::invalid_argument("direct_sum: empty");
    Expr e;
    e.kind = ExprKind::DirectSum;
    e.kids = std::move(kids);
    return make(std::move(e));
}

ExprPtr twist(ExprPtr x, long m) {
    Expr e;
    e.kind = ExprKind::Twist;
    e.shift = m;
    e.kids = {std::move(x)};
    return make(std::move(e));
}

ExprPtr dual(ExprPtr x) {
    Expr e;
    e.kind = ExprKind::Dual;
    e.kids = {std::move(x)};
    return make(std::move(e));
}

ExprPtr tensor(ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = ExprKind::Tensor;
    e.kids = {std::move(a), std::move(b)};
    return make(std::move(e));
}

ExprPtr sym_pow_line_sum(int n, long q, std::vector<long> degrees) {
    if (q < 0) throw std::invalid_argument("sym_pow_line_sum: q < 0");
    Expr e;
    e.kind = ExprKind::SymPowLineSum;
    e.power = q;
    e.params.n = n;
    e.twists = std::move(degrees);
    return make(std::move(e));
}

ExprPtr wedge_pow_line_sum(int n, long q, std::vector<long> degrees) {
    if (q < 0) throw std::invalid_argument("wedge_pow_line_sum: q < 0");
    Expr e;
    e.kind = ExprKind::WedgePowLineSum;
    e.power = q;
    e.params.n = n;
    e.twists = std::move(degrees);
    return make(std::move(e));
}

ExprPtr q_bundle(const TangoParams& p) {
    p.require_valid();
    Expr e;
    e.kind = ExprKind::QBundle;
    e.params = p;
    return make(std::move(e));
}

ExprPtr sym_q(long q, const TangoParams& p) {
    p.require_valid();
    if (q < 0) throw std::invalid_argument("sym_q: q < 0");
    Expr e;
    e.kind = ExprKind::SymQ;
    e.power = q;
    e.params = p;
    return make(std::move(e));
}

ExprPtr wedge_q(long q, const TangoParams& p) {
    p.require_valid();
    if (q < 0) throw std::invalid_argument("wedge_q: q < 0");
    Expr e;
    e.kind = ExprKind::WedgeQ;
    e.power = q;
    e.params = p;
    return make(std::move(e));
}

ExprPtr f_bundle(const TangoParams& p) {
    p.require_valid();
    Expr e;
    e.kind = ExprKind::FBundle;
    e.params = p;
    return make(std::move(e));
}

int ambient_dim(const Expr& e) {
    switch (e.kind) {
    case ExprKind::LineSum:
    case ExprKind::SymPowLineSum:
    case ExprKind::WedgePowLineSum:
    case ExprKind::QBundle:
    case ExprKind::SymQ:
    case ExprKind::WedgeQ:
    case ExprKind::FBundle:
        return e.params.n;
    default:
        return ambient_dim(*e.kids.at(0));
    }
}

std::vector<long> quotient_middle(const TangoParams& p) {
    p.require_valid();
    std::vector<long> out;
    for (int i = 0; i <= p.n; ++i)
        out.push_back(static_cast<long>(p.n) * p.alpha + i * (p.beta - p.alpha));
    return out;
}

std::vector<long> tango_middle(const TangoParams& p) {
    p.require_valid();
    std::vector<long> out;
    for (int k = 1; k <= 2 * p.n - 1; ++k)
        out.push_back(2L * p.n * p.alpha + k * (p.beta - p.alpha));
    return out;
}

long c1_quotient(const TangoParams& p) {
    long sum = p.gamma;
    for (long d : quotient_middle(p)) sum += d;
    return sum;
}

long c1_tango(const TangoParams& p) {
    long sum = 0;
    for (long e : tango_middle(p)) sum += e;
    for (long d : quotient_middle(p)) sum -= d;
    return sum;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

std::vector<long> multiset_sums(long q, const std::vector<long>& ds) {
    // Degree sums over all size-q multisets of ds (Sym^q of the line sum).
    std::vector<long> out;
    std::function<void(size_t, long, long)> rec = [&](size_t start, long left, long acc) {
        if (left == 0) {
            out.push_back(acc);
            return;
        }
        for (size_t i = start; i < ds.size(); ++i) rec(i, left - 1, acc + ds[i]);
    };
    rec(0, q, 0);
    return out;
}

std::vector<long> subset_sums(long q, const std::vector<long>& ds) {
    // Degree sums over all size-q subsets (Wedge^q of the line sum).
    std::vector<long> out;
    std::function<void(size_t, long, long)> rec = [&](size_t start, long left, long acc) {
        if (left == 0) {
            out.push_back(acc);
            return;
        }
        if (ds.size() - start < static_cast<size_t>(left)) return;
        for (size_t i = start; i < ds.size(); ++i) rec(i + 1, left - 1, acc + ds[i]);
    };
    rec(0, q, 0);
    return out;
}

ExprPtr norm(const ExprPtr& e);

ExprPtr sorted_line_sum(int n, std::vector<long> ds) {
    std::sort(ds.begin(), ds.end(), std::greater<long>());
    return line_sum(n, std::move(ds));
}

ExprPtr norm_sum(int n, std::vector<ExprPtr> members) {
    // members are already normalized; flatten, merge line sums, sort.
    std::vector<long> degrees;
    std::vector<ExprPtr> atoms;
    std::function<void(const ExprPtr&)> collect = [&](const ExprPtr& m) {
        if (m->kind == ExprKind::DirectSum) {
            for (const auto& k : m->kids) collect(k);
        } else if (m->kind == ExprKind::LineSum) {
            degrees.insert(degrees.end(), m->twists.begin(), m->twists.end());
        } else {
            atoms.push_back(m);
        }
    };
    for (const auto& m : members) collect(m);
    std::vector<ExprPtr> out;
    if (!degrees.empty() || atoms.empty()) out.push_back(sorted_line_sum(n, std::move(degrees)));
    std::sort(atoms.begin(), atoms.end(),
              [](const ExprPtr& a, const ExprPtr& b) { return key_of(a) < key_of(b); });
    out.insert(out.end(), atoms.begin(), atoms.end());
    if (out.size() == 1) return out.front();
    return direct_sum(std::move(out));
}

ExprPtr norm_twist(const ExprPtr& x, long m) {
    // x normalized.
    if (m == 0) return x;
    switch (x->kind) {
    case ExprKind::LineSum: {
        std::vector<long> ds = x->twists;
        for (auto& d : ds) d += m;
        return line_sum(x->params.n, std::move(ds));
    }
    case ExprKind::DirectSum: {
        std::vector<ExprPtr> kids;
        for (const auto& k : x->kids) kids.push_back(norm_twist(k, m));
        return norm_sum(ambient_dim(*x), std::move(kids));
    }
    case ExprKind::Twist: {
        long total = x->shift + m;
        return total == 0 ? x->kids[0] : twist(x->kids[0], total);
    }
    default:
        return twist(x, m);
    }
}

ExprPtr norm_dual(const ExprPtr& x) {
    // x normalized.
    switch (x->kind) {
    case ExprKind::LineSum: {
        std::vector<long> ds = x->twists;
        for (auto& d : ds) d = -d;
        return sorted_line_sum(x->params.n, std::move(ds));
    }
    case ExprKind::DirectSum: {
        std::vector<ExprPtr> kids;
        for (const auto& k : x->kids) kids.push_back(norm_dual(k));
        return norm_sum(ambient_dim(*x), std::move(kids));
    }
    case ExprKind::Twist:
        return norm_twist(norm_dual(x->kids[0]), -x->shift);
    case ExprKind::Dual:
        return x->kids[0];
    case ExprKind::Tensor:
        return norm(tensor(dual(x->kids[0]), dual(x->kids[1])));
    case ExprKind::WedgeQ:
        // (Wedge^q Q)^* = Wedge^{n-q} Q (-c1(Q)), via the pairing into det Q.
        return norm_twist(norm(wedge_q(x->params.n - x->power, x->params)),
                          -c1_quotient(x->params));
    default:
        return dual(x);
    }
}

ExprPtr norm_tensor(const ExprPtr& a, const ExprPtr& b) {
    // a, b normalized.
    int n = ambient_dim(*a);
    if (a->kind == ExprKind::DirectSum || b->kind == ExprKind::DirectSum) {
        const ExprPtr& s = a->kind == ExprKind::DirectSum ? a : b;
        const ExprPtr& o = a->kind == ExprKind::DirectSum ? b : a;
        std::vector<ExprPtr> kids;
        for (const auto& k : s->kids) kids.push_back(norm_tensor(k, o));
        return norm_sum(n, std::move(kids));
    }
    if (a->kind == ExprKind::LineSum || b->kind == ExprKind::LineSum) {
        const ExprPtr& ls = a->kind == ExprKind::LineSum ? a : b;
        const ExprPtr& o = a->kind == ExprKind::LineSum ? b : a;
        if (o->kind == ExprKind::LineSum) {
            std::vector<long> ds;
            for (long x : ls->twists)
                for (long y : o->twists) ds.push_back(x + y);
            return sorted_line_sum(n, std::move(ds));
        }
        std::vector<ExprPtr> kids;
        for (long d : ls->twists) kids.push_back(norm_twist(o, d));
        if (kids.empty()) return line_sum(n, {});
        return norm_sum(n, std::move(kids));
    }
    // Pull twists outward so the tensor core is twist-free.
    long shift = 0;
    ExprPtr ca = a, cb = b;
    if (ca->kind == ExprKind::Twist) {
        shift += ca->shift;
        ca = ca->kids[0];
    }
    if (cb->kind == ExprKind::Twist) {
        shift += cb->shift;
        cb = cb->kids[0];
    }
    if (key_of(cb) < key_of(ca)) std::swap(ca, cb);
    return norm_twist(tensor(ca, cb), shift);
}

ExprPtr norm(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::LineSum:
        return sorted_line_sum(e->params.n, e->twists);
    case ExprKind::DirectSum: {
        std::vector<ExprPtr> kids;
        for (const auto& k : e->kids) kids.push_back(norm(k));
        return norm_sum(ambient_dim(*e), std::move(kids));
    }
    case ExprKind::Twist:
        return norm_twist(norm(e->kids[0]), e->shift);
    case ExprKind::Dual:
        return norm_dual(norm(e->kids[0]));
    case ExprKind::Tensor:
        return norm_tensor(norm(e->kids[0]), norm(e->kids[1]));
    case ExprKind::SymPowLineSum:
        if (e->power == 0) return line_sum(e->params.n, {0});
        return sorted_line_sum(e->params.n, multiset_sums(e->power, e->twists));
    case ExprKind::WedgePowLineSum:
        if (e->power == 0) return line_sum(e->params.n, {0});
        return sorted_line_sum(e->params.n, subset_sums(e->power, e->twists));
    case ExprKind::QBundle:
    case ExprKind::FBundle:
        return e;
    case ExprKind::SymQ:
        if (e->power == 0) return line_sum(e->params.n, {0});
        if (e->power == 1) return q_bundle(e->params);
        return e;
    case ExprKind::WedgeQ:
        if (e->power == 0) return line_sum(e->params.n, {0});
        if (e->power == 1) return q_bundle(e->params);
        if (e->power == e->params.n) return line_sum(e->params.n, {c1_quotient(e->params)});
        if (e->power > e->params.n) return line_sum(e->params.n, {});
        return e;
    }
    throw std::logic_error("normalize: unknown kind");
}

} // namespace

ExprPtr normalize(const ExprPtr& e) { return norm(e); }

// ---------------------------------------------------------------------------
// Rank, Chern, slope

Int rank_of(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::LineSum:
        return Int(e->twists.size());
    case ExprKind::DirectSum: {
        Int r = 0;
        for (const auto& k : e->kids) r += rank_of(k);
        return r;
    }
    case ExprKind::Twist:
    case ExprKind::Dual:
        return rank_of(e->kids[0]);
    case ExprKind::Tensor:
        return rank_of(e->kids[0]) * rank_of(e->kids[1]);
    case ExprKind::SymPowLineSum:
        return binom(static_cast<long>(e->twists.size()) + e->power - 1, e->power);
    case ExprKind::WedgePowLineSum:
        return binom(static_cast<long>(e->twists.size()), e->power);
    case ExprKind::QBundle:
        return e->params.n;
    case ExprKind::SymQ:
        return binom(e->params.n + e->power - 1, e->power);
    case ExprKind::WedgeQ:
        return binom(e->params.n, e->power);
    case ExprKind::FBundle:
        return e->params.n - 1;
    }
    throw std::logic_error("rank_of: unknown kind");
}

namespace {

using Poly = std::vector<Int>; // c_0..c_n

Poly poly_one(int n) {
    Poly p(static_cast<size_t>(n) + 1, 0);
    p[0] = 1;
    return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; i + j < a.size() && j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

Poly poly_inv(const Poly& a) {
    if (a.at(0) != 1) throw std::logic_error("poly_inv: constant term != 1");
    Poly b(a.size(), 0);
    b[0] = 1;
    for (size_t k = 1; k < a.size(); ++k) {
        Int acc = 0;
        for (size_t j = 1; j <= k; ++j) acc += a[j] * b[k - j];
        b[k] = -acc;
    }
    return b;
}

Poly line_sum_chern(int n, const std::vector<long>& ds) {
    Poly p = poly_one(n);
    for (long d : ds) {
        Poly f = poly_one(n);
        if (n >= 1) f[1] = d;
        p = poly_mul(p, f);
    }
    return p;
}

// c(E(m)) from c(E) for a rank-r bundle: c_k' = sum_i C(r-i, k-i) m^{k-i} c_i.
Poly twist_chern(const Poly& c, const Int& rank, long m) {
    Poly out(c.size(), 0);
    for (size_t k = 0; k < c.size(); ++k) {
        Int acc = 0;
        for (size_t i = 0; i <= k; ++i) {
            Int mp = 1;
            for (size_t t = 0; t < k - i; ++t) mp *= m;
            acc += gen_binom(rank - Int(i), static_cast<long>(k - i)) * mp * c[i];
        }
        out[k] = acc;
    }
    return out;
}

Poly q_chern(const TangoParams& p) {
    return poly_mul(line_sum_chern(p.n, quotient_middle(p)),
                    poly_inv(line_sum_chern(p.n, {-p.gamma})));
}

Poly f_chern(const TangoParams& p) {
    Poly q_shift = twist_chern(q_chern(p), Int(p.n), -p.gamma);
    Poly f_gamma = poly_mul(line_sum_chern(p.n, tango_middle(p)), poly_inv(q_shift));
    return twist_chern(f_gamma, Int(p.n - 1), -p.gamma);
}

} // namespace

ChernData chern_of(const ExprPtr& raw) {
    ExprPtr e = normalize(raw);
    int n = ambient_dim(*e);
    ChernData out;
    out.rank = rank_of(e);
    switch (e->kind) {
    case ExprKind::LineSum:
        out.chern = line_sum_chern(n, e->twists);
        return out;
    case ExprKind::QBundle:
        out.chern = q_chern(e->params);
        return out;
    case ExprKind::FBundle:
        out.chern = f_chern(e->params);
        return out;
    case ExprKind::SymQ: {
        out.chern = poly_one(n);
        out.chern[1] = binom(e->params.n + e->power - 1, e->power - 1) * q_chern(e->params)[1];
        out.full = false;
        return out;
    }
    case ExprKind::WedgeQ: {
        out.chern = poly_one(n);
        out.chern[1] = binom(e->params.n - 1, e->power - 1) * q_chern(e->params)[1];
        out.full = false;
        return out;
    }
    case ExprKind::DirectSum: {
        out.chern = poly_one(n);
        out.full = true;
        Int c1 = 0;
        for (const auto& k : e->kids) {
            ChernData ck = chern_of(k);
            c1 += ck.c1();
            if (ck.full && out.full)
                out.chern = poly_mul(out.chern, ck.chern);
            else
                out.full = false;
        }
        if (!out.full) {
            out.chern = poly_one(n);
            out.chern[1] = c1;
        }
        return out;
    }
    case ExprKind::Twist: {
        ChernData ck = chern_of(e->kids[0]);
        out.full = ck.full;
        if (ck.full) {
            out.chern = twist_chern(ck.chern, ck.rank, e->shift);
        } else {
            out.chern = poly_one(n);
            out.chern[1] = ck.c1() + ck.rank * e->shift;
        }
        return out;
    }
    case ExprKind::Dual: {
        ChernData ck = chern_of(e->kids[0]);
        out.full = ck.full;
        out.chern = ck.chern;
        for (size_t i = 1; i < out.chern.size(); i += 2) out.chern[i] = -out.chern[i];
        return out;
    }
    case ExprKind::Tensor: {
        ChernData ca = chern_of(e->kids[0]);
        ChernData cb = chern_of(e->kids[1]);
        out.chern = poly_one(n);
        out.chern[1] = cb.rank * ca.c1() + ca.rank * cb.c1();
        out.full = false;
        return out;
    }
    default:
        throw std::logic_error("chern_of: non-normalized kind");
    }
}

Rat slope_of(const ExprPtr& e) {
    ChernData c = chern_of(e);
    if (c.rank == 0) throw std::invalid_argument("slope_of: rank 0");
    return Rat(c.c1(), c.rank);
}

// ---------------------------------------------------------------------------
// Canonical keys

namespace {

std::string params_key(const TangoParams& p) {
    std::ostringstream os;
    os << "{" << p.n << "," << p.gamma << "," << p.alpha << "," << p.beta << "}";
    return os.str();
}

} // namespace

std::string key_of(const ExprPtr& e) {
    std::ostringstream os;
    switch (e->kind) {
    case ExprKind::LineSum: {
        os << "O{";
        for (size_t i = 0; i < e->twists.size(); ++i) {
            if (i) os << ",";
            os << e->twists[i];
        }
        os << "}@" << e->params.n;
        return os.str();
    }
    case ExprKind::DirectSum: {
        os << "[";
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (i) os << "|";
            os << key_of(e->kids[i]);
        }
        os << "]";
        return os.str();
    }
    case ExprKind::Twist:
        return key_of(e->kids[0]) + "(" + std::to_string(e->shift) + ")";
    case ExprKind::Dual:
        return key_of(e->kids[0]) + "*";
    case ExprKind::Tensor:
        return "(" + key_of(e->kids[0]) + "&" + key_of(e->kids[1]) + ")";
    case ExprKind::SymPowLineSum:
    case ExprKind::WedgePowLineSum:
        return key_of(normalize(e));
    case ExprKind::QBundle:
        return "Q" + params_key(e->params);
    case ExprKind::SymQ:
        return "S" + std::to_string(e->power) + "Q" + params_key(e->params);
    case ExprKind::WedgeQ:
        return "W" + std::to_string(e->power) + "Q" + params_key(e->params);
    case ExprKind::FBundle:
        return "F" + params_key(e->params);
    }
    throw std::logic_error("key_of: unknown kind");
}

namespace {

struct KeyParser {
    const std::string& s;
    size_t pos = 0;

    explicit KeyParser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("bad cache key at offset " + std::to_string(pos) + ": " + why);
    }
    char peek() { return pos < s.size() ? s[pos] : '\0'; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    long parse_long() {
        size_t start = pos;
        if (peek() == '-') ++pos;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        if (pos == start || (pos == start + 1 && s[start] == '-')) fail("expected integer");
        return std::stol(s.substr(start, pos - start));
    }
    TangoParams parse_params() {
        expect('{');
        TangoParams p;
        p.n = static_cast<int>(parse_long());
        expect(',');
        p.gamma = parse_long();
        expect(',');
        p.alpha = parse_long();
        expect(',');
        p.beta = parse_long();
        expect('}');
        return p;
    }
    ExprPtr parse() {
        ExprPtr e = parse_core();
        for (;;) {
            if (peek() == '*') {
                ++pos;
                e = dual(e);
            } else if (peek() == '(') {
                ++pos;
                long m = parse_long();
                expect(')');
                e = twist(e, m);
            } else {
                break;
            }
        }
        return e;
    }
    ExprPtr parse_core() {
        char c = peek();
        if (c == '[') {
            ++pos;
            std::vector<ExprPtr> kids;
            kids.push_back(parse());
            while (peek() == '|') {
                ++pos;
                kids.push_back(parse());
            }
            expect(']');
            return direct_sum(std::move(kids));
        }
        if (c == '(') {
            ++pos;
            ExprPtr a = parse();
            expect('&');
            ExprPtr b = parse();
            expect(')');
            return tensor(std::move(a), std::move(b));
        }
        if (c == 'O') {
            ++pos;
            expect('{');
            std::vector<long> ds;
            if (peek() != '}') {
                ds.push_back(parse_long());
                while (peek() == ',') {
                    ++pos;
                    ds.push_back(parse_long());
                }
            }
            expect('}');
            expect('@');
            int n = static_cast<int>(parse_long());
            return line_sum(n, std::move(ds));
        }
        if (c == 'Q') {
            ++pos;
            return q_bundle(parse_params());
        }
        if (c == 'F') {
            ++pos;
            return f_bundle(parse_params());
        }
        if (c == 'S') {
            ++pos;
            long q = parse_long();
            expect('Q');
            return sym_q(q, parse_params());
        }
        if (c == 'W') {
            ++pos;
            long q = parse_long();
            expect('Q');
            return wedge_q(q, parse_params());
        }
        fail("unexpected character");
    }
};

} // namespace

ExprPtr expr_from_key(const std::string& key) {
    KeyParser p(key);
    ExprPtr e = p.parse();
    if (p.pos != key.size()) p.fail("trailing input");
    return e;
}

// ---------------------------------------------------------------------------
// Surface syntax

namespace {

struct Lexer {
    std::string text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(const std::string& tok) {
        skip_ws();
        if (text.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    bool peek_char(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool eat_char(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect_char(char c) {
        if (!eat_char(c))
            throw ParseError("expected '" + std::string(1, c) + "' at offset " +
                             std::to_string(pos));
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string word = text.substr(start, pos - start);
        for (auto& ch : word) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return word;
    }
    long integer() {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits)
            throw ParseError("expected integer at offset " + std::to_string(start));
        return std::stol(text.substr(start, pos - start));
    }
    bool peek_int() {
        skip_ws();
        if (pos >= text.size()) return false;
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        return (c == '-' || c == '+') && pos + 1 < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[pos + 1]));
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
};

struct SurfaceParser {
    Lexer lex;
    TangoParams params;

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        if (!lex.done())
            throw ParseError("trailing input at offset " + std::to_string(lex.pos));
        return e;
    }
    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        while (lex.eat("⊕") || lex.eat_char('+')) e = direct_sum({e, parse_term()});
        return e;
    }
    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (lex.eat("⊗") || lex.eat_char('@')) e = tensor(e, parse_factor());
        return e;
    }
    ExprPtr parse_factor() {
        ExprPtr e = parse_atom();
        for (;;) {
            if (lex.eat_char('*')) {
                e = dual(e);
            } else if (lex.peek_char('(')) {
                lex.expect_char('(');
                long m = lex.integer();
                lex.expect_char(')');
                e = twist(e, m);
            } else {
                break;
            }
        }
        return e;
    }
    std::vector<long> brace_list() {
        lex.expect_char('{');
        std::vector<long> ds;
        if (!lex.peek_char('}')) {
            ds.push_back(lex.integer());
            while (lex.eat_char(',')) ds.push_back(lex.integer());
        }
        lex.expect_char('}');
        return ds;
    }
    ExprPtr parse_atom() {
        if (lex.peek_char('(')) {
            lex.expect_char('(');
            ExprPtr e = parse_sum();
            lex.expect_char(')');
            return e;
        }
        std::string word = lex.ident();
        if (word == "q") return q_bundle(params);
        if (word == "f") return f_bundle(params);
        if (word == "o") {
            lex.expect_char('(');
            long d = lex.integer();
            lex.expect_char(')');
            return line(params.n, d);
        }
        if (word == "symq" || word == "wedgeq") {
            lex.expect_char('[');
            long q = lex.integer();
            lex.expect_char(']');
            if (q < 0) throw ParseError(word + " power must be >= 0");
            return word == "symq" ? sym_q(q, params) : wedge_q(q, params);
        }
        if (word == "sym" || word == "wedge") {
            lex.expect_char('[');
            long q = lex.integer();
            lex.expect_char(']');
            if (q < 0) throw ParseError(word + " power must be >= 0");
            auto ds = brace_list();
            return word == "sym" ? sym_pow_line_sum(params.n, q, std::move(ds))
                                 : wedge_pow_line_sum(params.n, q, std::move(ds));
        }
        throw ParseError("unknown atom '" + word + "' at offset " + std::to_string(lex.pos));
    }
};

} // namespace

ExprPtr parse_expr(const std::string& text, const TangoParams& params) {
    params.require_valid();
    SurfaceParser p;
    p.lex.text = text;
    p.params = params;
    return p.parse();
}

std::string to_string(const ExprPtr& e) {
    auto wrap = [](const ExprPtr& k, const std::string& s) {
        if (k->kind == ExprKind::DirectSum || k->kind == ExprKind::Tensor)
            return "(" + s + ")";
        return s;
    };
    std::ostringstream os;
    switch (e->kind) {
    case ExprKind::LineSum: {
        if (e->twists.empty()) return "0";
        for (size_t i = 0; i < e->twists.size(); ++i) {
            if (i) os << " ⊕ ";
            os << "O(" << e->twists[i] << ")";
        }
        return os.str();
    }
    case ExprKind::DirectSum: {
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (i) os << " ⊕ ";
            os << wrap(e->kids[i], to_string(e->kids[i]));
        }
        return os.str();
    }
    case ExprKind::Twist:
        return wrap(e->kids[0], to_string(e->kids[0])) + "(" + std::to_string(e->shift) + ")";
    case ExprKind::Dual:
        return wrap(e->kids[0], to_string(e->kids[0])) + "*";
    case ExprKind::Tensor:
        return wrap(e->kids[0], to_string(e->kids[0])) + " ⊗ " +
               wrap(e->kids[1], to_string(e->kids[1]));
    case ExprKind::SymPowLineSum:
    case ExprKind::WedgePowLineSum: {
        os << (e->kind == ExprKind::SymPowLineSum ? "Sym[" : "Wedge[") << e->power << "]{";
        for (size_t i = 0; i < e->twists.size(); ++i) {
            if (i) os << ",";
            os << e->twists[i];
        }
        os << "}";
        return os.str();
    }
    case ExprKind::QBundle:
        return "Q";
    case ExprKind::SymQ:
        return "SymQ[" + std::to_string(e->power) + "]";
    case ExprKind::WedgeQ:
        return "WedgeQ[" + std::to_string(e->power) + "]";
    case ExprKind::FBundle:
        return "F";
    }
    throw std::logic_error("to_string: unknown kind");
}

} // namespace tango
