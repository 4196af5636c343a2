#include "boxdim/core.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace boxdim {

int GroupSpec::rank() const {
    switch (kind) {
        case GroupKind::FreeAbelian:
            return param;
        case GroupKind::Unitriangular:
            return param * (param - 1) / 2;
        case GroupKind::Product: {
            int r = 0;
            for (const auto& f : factors) r += f.rank();
            return r;
        }
    }
    return 0;
}

bool GroupSpec::operator==(const GroupSpec& o) const {
    return kind == o.kind && param == o.param && factors == o.factors &&
           generators == o.generators;
}

GroupSpec free_abelian(int m) {
    if (m < 1) throw std::invalid_argument("free_abelian: m must be >= 1");
    GroupSpec s;
    s.kind = GroupKind::FreeAbelian;
    s.param = m;
    return s;
}

GroupSpec unitriangular(int d) {
    if (d < 2) throw std::invalid_argument("unitriangular: d must be >= 2");
    GroupSpec s;
    s.kind = GroupKind::Unitriangular;
    s.param = d;
    return s;
}

GroupSpec direct_product(std::vector<GroupSpec> factors) {
    if (factors.empty())
        throw std::invalid_argument("direct_product: needs at least one factor");
    GroupSpec s;
    s.kind = GroupKind::Product;
    s.param = static_cast<int>(factors.size());
    s.factors = std::move(factors);
    return s;
}

int ut_index(int d, int i, int j) {
    // Entries (1,2),(1,3),...,(1,d),(2,3),...: row i contributes d-i entries.
    if (!(1 <= i && i < j && j <= d))
        throw std::invalid_argument("ut_index: need 1 <= i < j <= d");
    int base = 0;
    for (int r = 1; r < i; ++r) base += d - r;
    return base + (j - i - 1);
}

Coords identity_of(const GroupSpec& spec) {
    return Coords(spec.rank(), Int(0));
}

bool is_identity(const Coords& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& v) { return v == 0; });
}

void check_conforms(const GroupSpec& spec, const Coords& a) {
    if (static_cast<int>(a.size()) != spec.rank())
        throw std::invalid_argument("element has " + std::to_string(a.size()) +
                                    " coordinates, spec expects " +
                                    std::to_string(spec.rank()));
}

static Coords mul_ut(int d, const Coords& a, const Coords& b) {
    Coords out(a.size());
    for (int i = 1; i < d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
            Int v = a[ut_index(d, i, j)] + b[ut_index(d, i, j)];
            for (int m = i + 1; m < j; ++m)
                v += a[ut_index(d, i, m)] * b[ut_index(d, m, j)];
            out[ut_index(d, i, j)] = v;
        }
    }
    return out;
}

static Coords inv_ut(int d, const Coords& a) {
    // Back-substitution along increasing j-i: x*a = 1 gives
    // x_{i,j} = -a_{i,j} - sum_{i<m<j} x_{i,m} a_{m,j}.
    Coords x(a.size());
    for (int lvl = 1; lvl < d; ++lvl) {
        for (int i = 1; i + lvl <= d; ++i) {
            int j = i + lvl;
            Int v = -a[ut_index(d, i, j)];
            for (int m = i + 1; m < j; ++m)
                v -= x[ut_index(d, i, m)] * a[ut_index(d, m, j)];
            x[ut_index(d, i, j)] = v;
        }
    }
    return x;
}

Coords multiply(const GroupSpec& spec, const Coords& a, const Coords& b) {
    check_conforms(spec, a);
    check_conforms(spec, b);
    switch (spec.kind) {
        case GroupKind::FreeAbelian: {
            Coords out(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
            return out;
        }
        case GroupKind::Unitriangular:
            return mul_ut(spec.param, a, b);
        case GroupKind::Product: {
            Coords out;
            out.reserve(a.size());
            std::size_t off = 0;
            for (const auto& f : spec.factors) {
                std::size_t r = f.rank();
                Coords fa(a.begin() + off, a.begin() + off + r);
                Coords fb(b.begin() + off, b.begin() + off + r);
                Coords fo = multiply(f, fa, fb);
                out.insert(out.end(), fo.begin(), fo.end());
                off += r;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

Coords invert(const GroupSpec& spec, const Coords& a) {
    check_conforms(spec, a);
    switch (spec.kind) {
        case GroupKind::FreeAbelian: {
            Coords out(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
            return out;
        }
        case GroupKind::Unitriangular:
            return inv_ut(spec.param, a);
        case GroupKind::Product: {
            Coords out;
            out.reserve(a.size());
            std::size_t off = 0;
            for (const auto& f : spec.factors) {
                std::size_t r = f.rank();
                Coords fa(a.begin() + off, a.begin() + off + r);
                Coords fo = invert(f, fa);
                out.insert(out.end(), fo.begin(), fo.end());
                off += r;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

Coords conjugate(const GroupSpec& spec, const Coords& g, const Coords& k) {
    return multiply(spec, multiply(spec, k, g), invert(spec, k));
}

Coords scaling_endomorphism(const GroupSpec& spec, const Int& r, const Coords& a) {
    if (r <= 0) throw std::invalid_argument("scaling_endomorphism: r must be > 0");
    check_conforms(spec, a);
    Coords out(a.size());
    switch (spec.kind) {
        case GroupKind::FreeAbelian:
            for (std::size_t i = 0; i < a.size(); ++i) out[i] = r * a[i];
            return out;
        case GroupKind::Unitriangular: {
            int d = spec.param;
            for (int i = 1; i < d; ++i)
                for (int j = i + 1; j <= d; ++j) {
                    Int p = 1;
                    for (int e = 0; e < j - i; ++e) p *= r;
                    out[ut_index(d, i, j)] = p * a[ut_index(d, i, j)];
                }
            return out;
        }
        case GroupKind::Product:
            throw std::invalid_argument(
                "scaling_endomorphism: product groups unsupported");
    }
    throw std::logic_error("unreachable");
}

static std::vector<Coords> default_generators(const GroupSpec& spec) {
    std::vector<Coords> gens;
    int r = spec.rank();
    switch (spec.kind) {
        case GroupKind::FreeAbelian:
            for (int i = 0; i < r; ++i) {
                Coords e(r, Int(0));
                e[i] = 1;
                gens.push_back(e);
                e[i] = -1;
                gens.push_back(e);
            }
            break;
        case GroupKind::Unitriangular: {
            // Superdiagonal elementary matrices E_{i,i+1} and inverses.
            int d = spec.param;
            for (int i = 1; i < d; ++i) {
                Coords e(r, Int(0));
                e[ut_index(d, i, i + 1)] = 1;
                gens.push_back(e);
                e[ut_index(d, i, i + 1)] = -1;
                gens.push_back(e);
            }
            break;
        }
        case GroupKind::Product: {
            std::size_t off = 0;
            for (const auto& f : spec.factors) {
                for (const auto& g : generators_of(f)) {
                    Coords e(r, Int(0));
                    std::copy(g.begin(), g.end(), e.begin() + off);
                    gens.push_back(e);
                }
                off += f.rank();
            }
            break;
        }
    }
    return gens;
}

const std::vector<Coords>& generators_of(const GroupSpec& spec) {
    if (!spec.generators.empty()) return spec.generators;
    // Default generator sets per backend, cached per distinct spec.
    static thread_local std::vector<std::pair<GroupSpec, std::vector<Coords>>> cache;
    for (const auto& [s, g] : cache)
        if (s == spec) return g;
    cache.emplace_back(spec, default_generators(spec));
    return cache.back().second;
}

Ball word_ball(const GroupSpec& spec, const Coords& center, int radius,
               std::size_t cap) {
    check_conforms(spec, center);
    if (radius < 0) throw std::invalid_argument("word_ball: radius must be >= 0");
    const auto& gens = generators_of(spec);

    Ball ball;
    ball.center = center;
    ball.radius = radius;

    CoordsMap<int> dist;
    dist.emplace(identity_of(spec), 0);
    std::deque<Coords> frontier{identity_of(spec)};
    while (!frontier.empty()) {
        Coords w = std::move(frontier.front());
        frontier.pop_front();
        int d = dist.at(w);
        if (d == radius) continue;
        for (const auto& s : gens) {
            Coords nw = multiply(spec, w, s);
            if (dist.emplace(nw, d + 1).second) {
                if (dist.size() > cap)
                    throw ResourceError("word_ball: element cap " +
                                        std::to_string(cap) + " exceeded");
                frontier.push_back(std::move(nw));
            }
        }
    }

    std::vector<std::pair<int, Coords>> ordered;
    ordered.reserve(dist.size());
    bool centered = is_identity(center);
    for (auto& [w, d] : dist)
        ordered.emplace_back(d, centered ? w : multiply(spec, w, center));
    std::sort(ordered.begin(), ordered.end());
    ball.elements.reserve(ordered.size());
    ball.distances.reserve(ordered.size());
    for (auto& [d, e] : ordered) {
        ball.distance_of.emplace(e, d);
        ball.elements.push_back(std::move(e));
        ball.distances.push_back(d);
    }
    return ball;
}

std::optional<int> word_distance(const GroupSpec& spec, const Coords& a,
                                 const Coords& b, int max_radius,
                                 std::size_t cap) {
    Coords q = multiply(spec, a, invert(spec, b));
    const auto& gens = generators_of(spec);
    CoordsMap<int> dist;
    dist.emplace(identity_of(spec), 0);
    if (is_identity(q)) return 0;
    std::deque<Coords> frontier{identity_of(spec)};
    while (!frontier.empty()) {
        Coords w = std::move(frontier.front());
        frontier.pop_front();
        int d = dist.at(w);
        if (d == max_radius) continue;
        for (const auto& s : gens) {
            Coords nw = multiply(spec, w, s);
            if (nw == q) return d + 1;
            if (dist.emplace(nw, d + 1).second) {
                if (dist.size() > cap)
                    throw ResourceError("word_distance: element cap exceeded");
                frontier.push_back(std::move(nw));
            }
        }
    }
    return std::nullopt;
}

std::string coords_to_string(const Coords& a) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        os << a[i];
    }
    os << ")";
    return os.str();
}

}  // namespace boxdim
