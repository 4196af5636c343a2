#include "boxdim/io.hpp"

namespace boxdim {

json int_to_json(const Int& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() &&
        v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected an integer, got: " + j.dump());
}

json rat_to_json(const Rat& v) {
    return json{{"num", boost::multiprecision::numerator(v).str()},
                {"den", boost::multiprecision::denominator(v).str()}};
}

Rat rat_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw std::invalid_argument("expected a rational {num, den}: " + j.dump());
    return Rat(int_from_json(j.at("num")), int_from_json(j.at("den")));
}

json coords_to_json(const Coords& c) {
    json a = json::array();
    for (const Int& v : c) a.push_back(int_to_json(v));
    return a;
}

Coords coords_from_json(const json& j) {
    if (!j.is_array())
        throw std::invalid_argument("expected a coordinate array: " + j.dump());
    Coords c;
    for (const auto& v : j) c.push_back(int_from_json(v));
    return c;
}

json group_to_json(const GroupSpec& spec) {
    json j;
    switch (spec.kind) {
        case GroupKind::FreeAbelian:
            j["kind"] = "free-abelian";
            j["params"] = spec.param;
            break;
        case GroupKind::Unitriangular:
            j["kind"] = "unitriangular";
            j["params"] = spec.param;
            break;
        case GroupKind::Product: {
            j["kind"] = "direct-product";
            json f = json::array();
            for (const auto& sub : spec.factors) f.push_back(group_to_json(sub));
            j["params"] = f;
            break;
        }
    }
    json gens = json::array();
    for (const auto& g : generators_of(spec)) gens.push_back(coords_to_json(g));
    j["generators"] = gens;
    return j;
}

GroupSpec group_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    GroupSpec spec;
    if (kind == "free-abelian") {
        spec = free_abelian(j.at("params").get<int>());
    } else if (kind == "unitriangular") {
        spec = unitriangular(j.at("params").get<int>());
    } else if (kind == "direct-product") {
        std::vector<GroupSpec> fs;
        for (const auto& f : j.at("params")) fs.push_back(group_from_json(f));
        spec = direct_product(std::move(fs));
    } else {
        throw std::invalid_argument("unknown group kind: " + kind);
    }
    if (j.contains("generators")) {
        std::vector<Coords> gens;
        for (const auto& g : j.at("generators"))
            gens.push_back(coords_from_json(g));
        if (gens != generators_of(spec)) spec.generators = std::move(gens);
    }
    return spec;
}

static std::string chain_kind_name(ChainKind k) {
    switch (k) {
        case ChainKind::FactorialAbelian: return "factorial-abelian";
        case ChainKind::ScaledUnitriangular: return "scaled-unitriangular";
        case ChainKind::CongruenceUnitriangular: return "congruence-unitriangular";
        case ChainKind::Custom: return "custom";
    }
    return "?";
}

json chain_to_json(const SubgroupChain& chain) {
    json j;
    j["group"] = group_to_json(chain.group);
    j["kind"] = chain_kind_name(chain.kind);
    if (chain.kind == ChainKind::Custom) {
        json st = json::array();
        for (const auto& d : chain.custom_stages) {
            json dv = json::array();
            for (const Int& v : d) dv.push_back(int_to_json(v));
            st.push_back(dv);
        }
        j["stages"] = st;
        if (!chain.custom_normal.empty()) j["normal"] = chain.custom_normal;
    }
    return j;
}

SubgroupChain chain_from_json(const json& j) {
    GroupSpec group = group_from_json(j.at("group"));
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "factorial-abelian") return factorial_abelian_chain(group);
    if (kind == "scaled-unitriangular") return scaled_unitriangular_chain(group);
    if (kind == "congruence-unitriangular")
        return congruence_unitriangular_chain(group);
    if (kind == "custom") {
        std::vector<std::vector<Int>> stages;
        for (const auto& st : j.at("stages")) {
            std::vector<Int> d;
            for (const auto& v : st) d.push_back(int_from_json(v));
            stages.push_back(std::move(d));
        }
        std::vector<bool> normal;
        if (j.contains("normal")) normal = j.at("normal").get<std::vector<bool>>();
        return custom_chain(group, std::move(stages), std::move(normal));
    }
    throw std::invalid_argument("unknown chain kind: " + kind);
}

json cover_to_json(const ColoredCover& cover) {
    json j;
    j["group"] = group_to_json(cover.group);
    json pd = json::array();
    for (const Int& d : cover.period_divisors) pd.push_back(int_to_json(d));
    j["period_stage"] = pd;
    j["scale_R"] = cover.scale_R;
    json colors = json::array();
    for (const auto& color : cover.colors) {
        json cl = json::array();
        for (const auto& b : color) {
            if (b.is_brick) {
                json lo = json::array(), len = json::array();
                for (const Int& v : b.lo) lo.push_back(int_to_json(v));
                for (const Int& v : b.len) len.push_back(int_to_json(v));
                cl.push_back(json{{"brick",
                                   {{"shift", coords_to_json(b.shift)},
                                    {"lo", lo},
                                    {"len", len}}}});
            } else {
                json pts = json::array();
                for (const auto& p : b.points) pts.push_back(coords_to_json(p));
                cl.push_back(pts);
            }
        }
        colors.push_back(cl);
    }
    j["colors"] = colors;
    return j;
}

ColoredCover cover_from_json(const json& j) {
    ColoredCover cover;
    cover.group = group_from_json(j.at("group"));
    for (const auto& d : j.at("period_stage"))
        cover.period_divisors.push_back(int_from_json(d));
    cover.scale_R = j.at("scale_R").get<int>();
    for (const auto& cl : j.at("colors")) {
        cover.colors.emplace_back();
        for (const auto& b : cl) {
            if (b.is_object() && b.contains("brick")) {
                const auto& br = b.at("brick");
                std::vector<Int> lo, len;
                for (const auto& v : br.at("lo")) lo.push_back(int_from_json(v));
                for (const auto& v : br.at("len")) len.push_back(int_from_json(v));
                cover.colors.back().push_back(
                    brick_base(cover.group, coords_from_json(br.at("shift")),
                               std::move(lo), std::move(len)));
            } else {
                std::vector<Coords> pts;
                for (const auto& p : b) pts.push_back(coords_from_json(p));
                cover.colors.back().push_back(explicit_base(std::move(pts)));
            }
        }
    }
    return cover;
}

json decay_to_json(const DecayFamily& family) {
    json j;
    j["group"] = group_to_json(family.group);
    json pd = json::array();
    for (const Int& d : family.period_divisors) pd.push_back(int_to_json(d));
    j["period_stage"] = pd;
    j["eps"] = rat_to_json(family.tolerance_eps);
    json m = json::array();
    for (const auto& g : family.scale_M) m.push_back(coords_to_json(g));
    j["M"] = m;
    j["supports_complete"] = family.supports_complete;
    json fns = json::array();
    for (const auto& fn : family.functions) {
        json entries = json::array();
        for (const auto& [p, v] : fn)
            entries.push_back(json{
                {"element", coords_to_json(p)},
                {"numerator", boost::multiprecision::numerator(v).str()},
                {"denominator", boost::multiprecision::denominator(v).str()}});
        fns.push_back(entries);
    }
    j["functions"] = fns;
    return j;
}

DecayFamily decay_from_json(const json& j) {
    DecayFamily family;
    family.group = group_from_json(j.at("group"));
    for (const auto& d : j.at("period_stage"))
        family.period_divisors.push_back(int_from_json(d));
    family.tolerance_eps = rat_from_json(j.at("eps"));
    for (const auto& g : j.at("M")) family.scale_M.push_back(coords_from_json(g));
    if (j.contains("supports_complete"))
        family.supports_complete = j.at("supports_complete").get<bool>();
    for (const auto& fn : j.at("functions")) {
        family.functions.emplace_back();
        for (const auto& e : fn)
            family.functions.back().emplace_back(
                coords_from_json(e.at("element")),
                Rat(Int(e.at("numerator").get<std::string>()),
                    Int(e.at("denominator").get<std::string>())));
        std::sort(family.functions.back().begin(), family.functions.back().end());
    }
    return family;
}

json check_to_json(const CheckResult& c) {
    json j{{"name", c.name}, {"pass", c.pass}};
    if (!c.witness.empty()) j["witness"] = c.witness;
    if (!c.measured.empty()) j["measured_value"] = c.measured;
    return j;
}

bool Certificate::verdict() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

json Certificate::to_json() const {
    json j;
    j["claim"] = claim;
    j["inputs"] = inputs;
    json cs = json::array();
    for (const auto& c : checks) cs.push_back(check_to_json(c));
    j["checks"] = cs;
    j["verdict"] = verdict() ? "pass" : "fail";
    j["tool_version"] = kToolVersion;
    return j;
}

}  // namespace boxdim
