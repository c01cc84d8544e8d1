#include "atlas/group.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace atlas {
namespace detail {

// Family-specific element representation. Elements are fixed-width byte
// strings; the group_table only ever composes, inverts and names them.
class element_backend {
  public:
    virtual ~element_backend() = default;
    virtual int width() const = 0;
    virtual void identity(uint8_t* out) const = 0;
    virtual void compose(const uint8_t* a, const uint8_t* b, uint8_t* out) const = 0;
    virtual void invert(const uint8_t* a, uint8_t* out) const = 0;
    virtual std::string name(const uint8_t* a) const = 0;
};

namespace {

// Permutations on d points, images stored directly. Composition follows the
// library-wide convention that the left factor acts first: (a*b)(i) = b(a(i)).
class perm_backend : public element_backend {
  public:
    explicit perm_backend(int d) : d_(d) {}
    int width() const override { return d_; }
    void identity(uint8_t* out) const override {
        for (int i = 0; i < d_; i++) out[i] = (uint8_t)i;
    }
    void compose(const uint8_t* a, const uint8_t* b, uint8_t* out) const override {
        for (int i = 0; i < d_; i++) out[i] = b[a[i]];
    }
    void invert(const uint8_t* a, uint8_t* out) const override {
        for (int i = 0; i < d_; i++) out[a[i]] = (uint8_t)i;
    }
    std::string name(const uint8_t* a) const override {
        std::string s;
        std::vector<bool> seen(d_, false);
        for (int i = 0; i < d_; i++) {
            if (seen[i] || a[i] == i) continue;
            s += '(';
            int j = i;
            bool first = true;
            while (!seen[j]) {
                seen[j] = true;
                if (!first) s += ' ';
                s += std::to_string(j + 1);
                first = false;
                j = a[j];
            }
            s += ')';
        }
        return s.empty() ? "()" : s;
    }

  private:
    int d_;
};

// 2x2 matrices over F_p with the ordinary matrix product; optionally
// identified with their negatives (for PSL2) by keeping the lexicographically
// smaller of {M, -M}.
class mat2_backend : public element_backend {
  public:
    mat2_backend(int p, bool mod_center) : p_(p), mod_center_(mod_center) {}
    int width() const override { return 4; }
    void identity(uint8_t* out) const override {
        out[0] = 1; out[1] = 0; out[2] = 0; out[3] = 1;
    }
    void compose(const uint8_t* a, const uint8_t* b, uint8_t* out) const override {
        out[0] = (uint8_t)((a[0] * b[0] + a[1] * b[2]) % p_);
        out[1] = (uint8_t)((a[0] * b[1] + a[1] * b[3]) % p_);
        out[2] = (uint8_t)((a[2] * b[0] + a[3] * b[2]) % p_);
        out[3] = (uint8_t)((a[2] * b[1] + a[3] * b[3]) % p_);
        canon(out);
    }
    void invert(const uint8_t* a, uint8_t* out) const override {
        // det = 1 for everything we build, so the adjugate is the inverse
        out[0] = a[3];
        out[1] = (uint8_t)((p_ - a[1]) % p_);
        out[2] = (uint8_t)((p_ - a[2]) % p_);
        out[3] = a[0];
        canon(out);
    }
    std::string name(const uint8_t* a) const override {
        std::ostringstream os;
        os << "[[" << (int)a[0] << "," << (int)a[1] << "],[" << (int)a[2] << "," << (int)a[3]
           << "]]";
        return os.str();
    }
    void canon(uint8_t* m) const {
        if (!mod_center_) return;
        uint8_t neg[4];
        for (int i = 0; i < 4; i++) neg[i] = (uint8_t)((p_ - m[i]) % p_);
        if (std::lexicographical_compare(neg, neg + 4, m, m + 4)) std::copy(neg, neg + 4, m);
    }

  private:
    int p_;
    bool mod_center_;
};

// Upper unitriangular 3x3 matrices over F_p, stored as (a, b, c) for
// [[1,a,c],[0,1,b],[0,0,1]]. For odd p this is the extraspecial group of
// order p^3 and exponent p.
class heis_backend : public element_backend {
  public:
    explicit heis_backend(int p) : p_(p) {}
    int width() const override { return 3; }
    void identity(uint8_t* out) const override { out[0] = out[1] = out[2] = 0; }
    void compose(const uint8_t* a, const uint8_t* b, uint8_t* out) const override {
        out[0] = (uint8_t)((a[0] + b[0]) % p_);
        out[1] = (uint8_t)((a[1] + b[1]) % p_);
        out[2] = (uint8_t)((a[2] + b[2] + a[0] * b[1]) % p_);
    }
    void invert(const uint8_t* a, uint8_t* out) const override {
        out[0] = (uint8_t)((p_ - a[0]) % p_);
        out[1] = (uint8_t)((p_ - a[1]) % p_);
        out[2] = (uint8_t)(((p_ - a[2]) % p_ + a[0] * a[1]) % p_);
    }
    std::string name(const uint8_t* a) const override {
        std::ostringstream os;
        os << "[[1," << (int)a[0] << "," << (int)a[2] << "],[0,1," << (int)a[1]
           << "],[0,0,1]]";
        return os.str();
    }

  private:
    int p_;
};

// Quaternion units, one byte per element: unit*2 + sign with units 1,i,j,k.
class quat_backend : public element_backend {
  public:
    int width() const override { return 1; }
    void identity(uint8_t* out) const override { out[0] = 0; }
    void compose(const uint8_t* a, const uint8_t* b, uint8_t* out) const override {
        static constexpr int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        static constexpr int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
        int u1 = a[0] >> 1, s1 = a[0] & 1, u2 = b[0] >> 1, s2 = b[0] & 1;
        out[0] = (uint8_t)((unit[u1][u2] << 1) | (s1 ^ s2 ^ sign[u1][u2]));
    }
    void invert(const uint8_t* a, uint8_t* out) const override {
        int u = a[0] >> 1, s = a[0] & 1;
        out[0] = (uint8_t)(u == 0 ? a[0] : ((u << 1) | (s ^ 1)));
    }
    std::string name(const uint8_t* a) const override {
        static const char* nm[8] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
        return nm[a[0]];
    }
};

}  // namespace
}  // namespace detail

namespace {

using lookup_map = std::unordered_map<std::string, int>;

constexpr int kHardOrderCap = 2000000;

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; d++)
        if (p % d == 0) return false;
    return true;
}

std::vector<uint8_t> perm_from_cycles(const std::vector<std::vector<int>>& cycles, int degree) {
    std::vector<uint8_t> img(degree);
    for (int i = 0; i < degree; i++) img[i] = (uint8_t)i;
    // cycles compose left to right (first listed acts first)
    for (const auto& cyc : cycles) {
        std::vector<uint8_t> step(degree);
        for (int i = 0; i < degree; i++) step[i] = (uint8_t)i;
        for (size_t i = 0; i < cyc.size(); i++) {
            int from = cyc[i] - 1, to = cyc[(i + 1) % cyc.size()] - 1;
            step[from] = (uint8_t)to;
        }
        for (int i = 0; i < degree; i++) img[i] = step[img[i]];
    }
    return img;
}

}  // namespace

int group_table::table_cap() {
    const char* env = std::getenv("ATLAS_TABLE_CAP");
    long v = env ? std::strtol(env, nullptr, 10) : 10000;
    if (v < 1) v = 1;
    if (v > 65535) v = 65535;
    return (int)v;
}

group_table group_table::build(std::shared_ptr<detail::element_backend> backend,
                               const std::vector<std::vector<uint8_t>>& gens, std::string spec) {
    group_table g;
    g.spec_ = std::move(spec);
    g.backend_ = backend;
    const int w = backend->width();
    g.elem_width_ = w;

    auto lookup = std::make_shared<lookup_map>();
    g.lookup_owner_ = lookup;
    g.lookup_ = lookup.get();

    std::vector<std::vector<uint8_t>> elems;
    auto key = [&](const std::vector<uint8_t>& e) { return std::string(e.begin(), e.end()); };

    std::vector<uint8_t> id(w);
    backend->identity(id.data());
    elems.push_back(id);
    (*lookup)[key(id)] = 0;

    // BFS closure; remember how each element was first produced so the dense
    // table can be filled without hashing (a*(p*g) = (a*p)*g).
    std::vector<int> def_prev{-1}, def_gen{-1};
    std::vector<uint8_t> tmp(w);
    for (size_t cur = 0; cur < elems.size(); cur++) {
        for (size_t t = 0; t < gens.size(); t++) {
            backend->compose(elems[cur].data(), gens[t].data(), tmp.data());
            auto k = key(tmp);
            if (lookup->emplace(k, (int)elems.size()).second) {
                elems.push_back(tmp);
                def_prev.push_back((int)cur);
                def_gen.push_back((int)t);
                if ((int)elems.size() > kHardOrderCap)
                    throw cap_error("group closure exceeded " + std::to_string(kHardOrderCap) +
                                    " elements");
            }
        }
    }

    const int m = (int)elems.size();
    g.order_ = m;
    g.elem_bytes_.resize((size_t)m * w);
    for (int i = 0; i < m; i++)
        std::copy(elems[i].begin(), elems[i].end(), g.elem_bytes_.begin() + (size_t)i * w);

    g.names_.resize(m);
    for (int i = 0; i < m; i++) g.names_[i] = backend->name(elems[i].data());

    g.gen_idx_.clear();
    for (const auto& ge : gens) {
        int idx = lookup->at(key(ge));
        if (idx != 0 && std::find(g.gen_idx_.begin(), g.gen_idx_.end(), idx) == g.gen_idx_.end())
            g.gen_idx_.push_back(idx);
    }

    if (m <= table_cap()) {
        g.table_.assign((size_t)m * m, 0);
        uint16_t* tab = g.table_.data();
        // identity column and generator columns directly
        for (int a = 0; a < m; a++) tab[(size_t)a * m] = (uint16_t)a;
        std::vector<bool> col_done(m, false);
        col_done[0] = true;
        for (size_t t = 0; t < gens.size(); t++) {
            int gi = lookup->at(key(gens[t]));
            if (col_done[gi]) continue;
            for (int a = 0; a < m; a++) {
                backend->compose(elems[a].data(), gens[t].data(), tmp.data());
                tab[(size_t)a * m + gi] = (uint16_t)lookup->at(key(tmp));
            }
            col_done[gi] = true;
        }
        for (int b = 1; b < m; b++) {
            if (col_done[b]) continue;
            const int p = def_prev[b];
            const int gcol = lookup->at(key(gens[def_gen[b]]));
            for (int a = 0; a < m; a++)
                tab[(size_t)a * m + b] = tab[(size_t)tab[(size_t)a * m + p] * m + gcol];
        }
    }

    g.inv_.resize(m);
    for (int i = 0; i < m; i++) {
        backend->invert(elems[i].data(), tmp.data());
        g.inv_[i] = lookup->at(key(tmp));
    }
    return g;
}

int group_table::slow_mul(int a, int b) const {
    std::vector<uint8_t> out(elem_width_);
    backend_->compose(elem_bytes_.data() + (size_t)a * elem_width_,
                      elem_bytes_.data() + (size_t)b * elem_width_, out.data());
    return static_cast<const lookup_map*>(lookup_)->at(std::string(out.begin(), out.end()));
}

std::optional<int> group_table::index_of_name(const std::string& nm) const {
    for (int i = 0; i < order_; i++)
        if (names_[i] == nm) return i;
    return std::nullopt;
}

int group_table::element_order(int x) const {
    int k = 1, y = x;
    while (y != identity) {
        y = mul(y, x);
        k++;
    }
    return k;
}

long long group_table::exponent() const {
    long long e = 1;
    for (int x = 0; x < order_; x++) e = std::lcm(e, (long long)element_order(x));
    return e;
}

bool group_table::is_abelian() const {
    for (int a : gen_idx_)
        for (int b : gen_idx_)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

const std::vector<std::vector<int>>& group_table::conjugacy_classes() const {
    if (!classes_.empty() || order_ == 0) return classes_;
    class_id_.assign(order_, -1);
    for (int x = 0; x < order_; x++) {
        if (class_id_[x] >= 0) continue;
        int cid = (int)classes_.size();
        std::vector<int> cls{x}, work{x};
        class_id_[x] = cid;
        while (!work.empty()) {
            int y = work.back();
            work.pop_back();
            for (int gidx : gen_idx_) {
                int z = conjugate(gidx, y);
                if (class_id_[z] < 0) {
                    class_id_[z] = cid;
                    cls.push_back(z);
                    work.push_back(z);
                }
            }
        }
        std::sort(cls.begin(), cls.end());
        classes_.push_back(std::move(cls));
    }
    return classes_;
}

int group_table::class_size(int x) const {
    conjugacy_classes();
    return (int)classes_[class_id_[x]].size();
}

std::vector<int> group_table::centralizer(int x) const {
    std::vector<int> c;
    for (int b = 0; b < order_; b++)
        if (mul(x, b) == mul(b, x)) c.push_back(b);
    return c;
}

std::vector<int> group_table::center() const {
    std::vector<int> z;
    conjugacy_classes();
    for (const auto& cls : classes_)
        if (cls.size() == 1) z.push_back(cls[0]);
    std::sort(z.begin(), z.end());
    return z;
}

long long group_table::commuting_pair_count() const {
    long long total = 0;
    for (int x = 0; x < order_; x++)
        for (int b = 0; b < order_; b++)
            if (mul(x, b) == mul(b, x)) total++;
    return total;
}

std::vector<int> group_table::subgroup_closure(const std::vector<int>& gens) const {
    std::vector<bool> in(order_, false);
    std::vector<int> elems{identity};
    in[identity] = true;
    std::vector<int> gs;
    for (int x : gens)
        if (!in[x]) {
            in[x] = true;
            elems.push_back(x);
            gs.push_back(x);
        } else if (x != identity && std::find(gs.begin(), gs.end(), x) == gs.end()) {
            gs.push_back(x);
        }
    for (size_t cur = 0; cur < elems.size(); cur++)
        for (int s : gs) {
            int y = mul(elems[cur], s);
            if (!in[y]) {
                in[y] = true;
                elems.push_back(y);
            }
        }
    std::sort(elems.begin(), elems.end());
    return elems;
}

bool group_table::is_normal(const std::vector<int>& sub) const {
    std::vector<bool> in(order_, false);
    for (int x : sub) in[x] = true;
    for (int h : sub)
        for (int gidx : gen_idx_)
            if (!in[conjugate(gidx, h)]) return false;
    return true;
}

bool group_table::is_simple() const {
    if (order_ == 1) return false;
    if (is_abelian()) return is_prime(order_);
    conjugacy_classes();
    for (const auto& cls : classes_) {
        if (cls.size() == 1 && cls[0] == identity) continue;
        // a full class generates a normal subgroup
        if ((int)subgroup_closure(cls).size() != order_) return false;
    }
    return true;
}

quotient_data group_table::quotient(const std::vector<int>& normal,
                                    const std::string& quotient_spec) const {
    if (normal.empty() || normal[0] != identity)
        throw usage_error("kernel must contain the identity");
    if (!is_normal(normal)) throw usage_error("kernel is not a normal subgroup");

    quotient_data out;
    out.proj.assign(order_, -1);
    for (int x = 0; x < order_; x++) {
        if (out.proj[x] >= 0) continue;
        int cid = (int)out.rep.size();
        out.rep.push_back(x);  // ascending scan: first member seen is the least
        for (int n : normal) out.proj[mul(x, n)] = cid;
    }

    const int q = (int)out.rep.size();
    check(q * (int)normal.size() == order_, "kernel does not partition the group into cosets");
    if (q > table_cap())
        throw cap_error("quotient order " + std::to_string(q) + " exceeds table cap");

    group_table& t = out.table;
    t.order_ = q;
    t.spec_ = quotient_spec;
    t.table_.assign((size_t)q * q, 0);
    for (int a = 0; a < q; a++)
        for (int b = 0; b < q; b++)
            t.table_[(size_t)a * q + b] = (uint16_t)out.proj[mul(out.rep[a], out.rep[b])];
    t.inv_.resize(q);
    for (int a = 0; a < q; a++) t.inv_[a] = out.proj[inv(out.rep[a])];
    t.names_.resize(q);
    for (int a = 0; a < q; a++) t.names_[a] = names_.empty() ? std::to_string(a) : names_[out.rep[a]];
    for (int gidx : gen_idx_) {
        int gi = out.proj[gidx];
        if (gi != 0 && std::find(t.gen_idx_.begin(), t.gen_idx_.end(), gi) == t.gen_idx_.end())
            t.gen_idx_.push_back(gi);
    }
    return out;
}

group_table group_table::symmetric(int n) {
    if (n < 1 || n > 8) throw usage_error("symmetric group supports 1 <= n <= 8");
    std::vector<std::vector<uint8_t>> gens;
    if (n >= 2) gens.push_back(perm_from_cycles({{1, 2}}, n));
    if (n >= 3) {
        std::vector<int> cyc(n);
        std::iota(cyc.begin(), cyc.end(), 1);
        gens.push_back(perm_from_cycles({cyc}, n));
    }
    return build(std::make_shared<detail::perm_backend>(n), gens, "S" + std::to_string(n));
}

group_table group_table::alternating(int n) {
    if (n < 1 || n > 8) throw usage_error("alternating group supports 1 <= n <= 8");
    std::vector<std::vector<uint8_t>> gens;
    if (n >= 3) gens.push_back(perm_from_cycles({{1, 2, 3}}, n));
    if (n >= 4) {
        std::vector<int> cyc;
        for (int i = n % 2 == 1 ? 1 : 2; i <= n; i++) cyc.push_back(i);
        gens.push_back(perm_from_cycles({cyc}, n));
    }
    return build(std::make_shared<detail::perm_backend>(std::max(n, 1)), gens,
                 "A" + std::to_string(n));
}

group_table group_table::dihedral(int order2n) {
    if (order2n < 6 || order2n % 2 != 0)
        throw usage_error("dihedral group takes an even order >= 6");
    int n = order2n / 2;
    if (n > 255) throw usage_error("dihedral group supports order <= 510");
    std::vector<int> rot(n);
    std::iota(rot.begin(), rot.end(), 1);
    std::vector<uint8_t> refl(n);
    for (int i = 0; i < n; i++) refl[i] = (uint8_t)(n - 1 - i);
    return build(std::make_shared<detail::perm_backend>(n),
                 {perm_from_cycles({rot}, n), refl}, "D" + std::to_string(order2n));
}

group_table group_table::quaternion8() {
    return build(std::make_shared<detail::quat_backend>(), {{2}, {4}}, "Q8");
}

group_table group_table::sl2(int p) {
    if (!is_prime(p) || p > 13) throw usage_error("SL2 supports prime p <= 13");
    return build(std::make_shared<detail::mat2_backend>(p, false),
                 {{1, 1, 0, 1}, {0, 1, (uint8_t)(p - 1), 0}}, "SL2(" + std::to_string(p) + ")");
}

group_table group_table::psl2(int p) {
    if (!is_prime(p) || p > 13) throw usage_error("PSL2 supports prime p <= 13");
    auto be = std::make_shared<detail::mat2_backend>(p, true);
    std::vector<std::vector<uint8_t>> gens = {{1, 1, 0, 1}, {0, 1, (uint8_t)(p - 1), 0}};
    for (auto& g : gens) be->canon(g.data());
    return build(be, gens, "PSL2(" + std::to_string(p) + ")");
}

group_table group_table::extraspecial_exp_p(int p) {
    if (p != 3 && p != 5 && p != 7)
        throw usage_error("extraspecial group supports odd prime p <= 7");
    return build(std::make_shared<detail::heis_backend>(p), {{1, 0, 0}, {0, 1, 0}},
                 "ES(" + std::to_string(p) + ")");
}

group_table group_table::from_permutations(
    const std::vector<std::vector<std::vector<int>>>& gens, const std::string& spec) {
    int degree = 1;
    for (const auto& g : gens)
        for (const auto& cyc : g)
            for (int pt : cyc) {
                if (pt < 1) throw usage_error("permutation points are 1-based");
                degree = std::max(degree, pt);
            }
    if (degree > 255) throw usage_error("permutations support at most 255 points");
    std::vector<std::vector<uint8_t>> gvecs;
    for (const auto& g : gens) gvecs.push_back(perm_from_cycles(g, degree));
    return build(std::make_shared<detail::perm_backend>(degree), gvecs, spec);
}

namespace {

std::vector<std::vector<int>> parse_cycles(const std::string& s) {
    std::vector<std::vector<int>> cycles;
    size_t i = 0;
    while (i < s.size()) {
        if (std::isspace((unsigned char)s[i])) {
            i++;
            continue;
        }
        if (s[i] != '(') throw usage_error("expected '(' in cycle notation: " + s);
        size_t close = s.find(')', i);
        if (close == std::string::npos) throw usage_error("unbalanced '(' in cycle notation");
        std::vector<int> cyc;
        std::istringstream is(s.substr(i + 1, close - i - 1));
        int pt;
        while (is >> pt) cyc.push_back(pt);
        if (!is.eof()) throw usage_error("bad cycle contents in: " + s);
        if (cyc.size() >= 2) cycles.push_back(cyc);
        i = close + 1;
    }
    return cycles;
}

}  // namespace

group_table group_table::parse_spec(const std::string& spec) {
    auto num_after = [&](size_t k) -> std::optional<int> {
        if (spec.size() <= k) return std::nullopt;
        for (size_t i = k; i < spec.size(); i++)
            if (!std::isdigit((unsigned char)spec[i])) return std::nullopt;
        return std::stoi(spec.substr(k));
    };
    auto paren_arg = [&](const std::string& head) -> std::optional<int> {
        if (spec.rfind(head + "(", 0) != 0 || spec.back() != ')') return std::nullopt;
        std::string inner = spec.substr(head.size() + 1, spec.size() - head.size() - 2);
        if (inner.empty()) return std::nullopt;
        for (char c : inner)
            if (!std::isdigit((unsigned char)c)) return std::nullopt;
        return std::stoi(inner);
    };

    if (spec == "Q8") return quaternion8();
    if (spec.rfind("perm:", 0) == 0) {
        std::string rest = spec.substr(5);
        std::vector<std::vector<std::vector<int>>> gens;
        std::string tok;
        int depth = 0;
        for (char c : rest + ",") {
            if (c == '(') depth++;
            if (c == ')') depth--;
            if (c == ',' && depth == 0) {
                if (!tok.empty()) gens.push_back(parse_cycles(tok));
                tok.clear();
            } else {
                tok += c;
            }
        }
        if (gens.empty()) throw usage_error("perm: needs at least one generator");
        return from_permutations(gens, spec);
    }
    if (auto p = paren_arg("SL2")) return sl2(*p);
    if (auto p = paren_arg("PSL2")) return psl2(*p);
    if (auto p = paren_arg("ES")) return extraspecial_exp_p(*p);
    if (!spec.empty() && spec[0] == 'S')
        if (auto n = num_after(1)) return symmetric(*n);
    if (!spec.empty() && spec[0] == 'A')
        if (auto n = num_after(1)) return alternating(*n);
    if (!spec.empty() && spec[0] == 'D')
        if (auto n = num_after(1)) return dihedral(*n);
    throw usage_error("unrecognized group spec: " + spec +
                      " (expected S<n>, A<n>, D<2n>, Q8, SL2(p), PSL2(p), ES(p), perm:<cycles>)");
}

// ---------------------------------------------------------------------------
// Automorphism search

namespace {

int aut_cap() {
    const char* env = std::getenv("ATLAS_AUT_CAP");
    long v = env ? std::strtol(env, nullptr, 10) : 1000;
    return (int)std::max(1L, v);
}

// Minimal-length generating sequence: repeatedly add the element that
// enlarges the generated subgroup the most, ties broken by least index.
std::vector<int> greedy_generating_sequence(const group_table& g) {
    std::vector<int> seq;
    size_t cur = 1;
    while ((int)cur < g.order()) {
        int best = -1;
        size_t best_sz = cur;
        for (int x = 1; x < g.order(); x++) {
            auto trial = seq;
            trial.push_back(x);
            size_t sz = g.subgroup_closure(trial).size();
            if (sz > best_sz) {
                best_sz = sz;
                best = x;
            }
            if ((int)best_sz == g.order()) break;
        }
        check(best >= 0, "generating sequence search stalled");
        seq.push_back(best);
        cur = best_sz;
    }
    return seq;
}

// Build the map determined by gens -> imgs on the subgroup they generate,
// checking consistency along the way. Returns false on contradiction. phi is
// -1 outside the generated subgroup.
bool close_partial(const group_table& g, const group_table& h, const std::vector<int>& gens,
                   const std::vector<int>& imgs, std::vector<int>& phi, std::vector<int>& elems) {
    phi.assign(g.order(), -1);
    phi[group_table::identity] = group_table::identity;
    elems.assign(1, group_table::identity);
    for (size_t t = 0; t < gens.size(); t++) {
        if (phi[gens[t]] == -1) {
            phi[gens[t]] = imgs[t];
            elems.push_back(gens[t]);
        } else if (phi[gens[t]] != imgs[t]) {
            return false;
        }
    }
    for (size_t cur = 0; cur < elems.size(); cur++) {
        int a = elems[cur];
        for (size_t t = 0; t < gens.size(); t++) {
            int b = g.mul(a, gens[t]);
            int fb = h.mul(phi[a], imgs[t]);
            if (phi[b] == -1) {
                phi[b] = fb;
                elems.push_back(b);
            } else if (phi[b] != fb) {
                return false;
            }
        }
    }
    return true;
}

void search_homs(const group_table& g, const group_table& h, const std::vector<int>& gseq,
                 const std::vector<std::vector<int>>& cand, size_t depth, std::vector<int>& imgs,
                 bool stop_at_first, std::vector<std::vector<int>>& out) {
    if (stop_at_first && !out.empty()) return;
    if (depth == gseq.size()) {
        std::vector<int> phi, elems;
        if (!close_partial(g, h, gseq, imgs, phi, elems)) return;
        if ((int)elems.size() != g.order()) return;  // gseq generates, so this is a defect guard
        std::vector<bool> hit(h.order(), false);
        for (int x = 0; x < g.order(); x++) {
            if (phi[x] < 0 || hit[phi[x]]) return;  // not bijective
            hit[phi[x]] = true;
        }
        out.push_back(phi);
        return;
    }
    std::vector<int> phi, elems;
    for (int c : cand[depth]) {
        imgs.push_back(c);
        if (close_partial(g, h, {gseq.begin(), gseq.begin() + depth + 1}, imgs, phi, elems))
            search_homs(g, h, gseq, cand, depth + 1, imgs, stop_at_first, out);
        imgs.pop_back();
        if (stop_at_first && !out.empty()) return;
    }
}

std::vector<std::vector<int>> iso_search(const group_table& g, const group_table& h,
                                         bool stop_at_first) {
    std::vector<std::vector<int>> out;
    if (g.order() != h.order()) return out;
    if (g.order() == 1) {
        out.push_back({0});
        return out;
    }
    auto gseq = greedy_generating_sequence(g);
    // candidate images share element order and conjugacy class size
    std::vector<std::vector<int>> cand(gseq.size());
    for (size_t d = 0; d < gseq.size(); d++) {
        int ord = g.element_order(gseq[d]);
        int csz = g.class_size(gseq[d]);
        for (int y = 0; y < h.order(); y++)
            if (h.element_order(y) == ord && h.class_size(y) == csz)
                cand[d].push_back(y);
    }
    std::vector<int> imgs;
    search_homs(g, h, gseq, cand, 0, imgs, stop_at_first, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::vector<int>> automorphism_group(const group_table& g) {
    if (g.order() > aut_cap())
        throw cap_error("automorphism search capped at order " + std::to_string(aut_cap()));
    auto auts = iso_search(g, g, false);
    check(!auts.empty(), "automorphism search found no identity map");

    // sanity: identity present, inner automorphisms present, closed under
    // composition (fully when small, on a sample otherwise)
    std::vector<int> idmap(g.order());
    std::iota(idmap.begin(), idmap.end(), 0);
    check(std::binary_search(auts.begin(), auts.end(), idmap), "identity automorphism missing");
    std::vector<int> conj(g.order());
    for (int x = 0; x < g.order(); x++) {
        for (int y = 0; y < g.order(); y++) conj[y] = g.conjugate(x, y);
        check(std::binary_search(auts.begin(), auts.end(), conj),
              "inner automorphism missing from search result");
    }
    const size_t max_pairs = 200000;
    size_t rows = auts.size() * auts.size() <= max_pairs
                      ? auts.size()
                      : std::max<size_t>(1, max_pairs / auts.size());
    std::vector<int> comp(g.order());
    for (size_t i = 0; i < rows; i++)
        for (size_t j = 0; j < auts.size(); j++) {
            for (int x = 0; x < g.order(); x++) comp[x] = auts[j][auts[i][x]];
            check(std::binary_search(auts.begin(), auts.end(), comp),
                  "automorphisms not closed under composition");
        }
    return auts;
}

std::optional<std::vector<int>> find_isomorphism(const group_table& a, const group_table& b) {
    auto found = iso_search(a, b, true);
    if (found.empty()) return std::nullopt;
    return found.front();
}

}  // namespace atlas
