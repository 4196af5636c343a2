#pragma once

#include "boxdim/chain.hpp"
#include "boxdim/cover.hpp"
#include "boxdim/decay.hpp"

#include <json.hpp>

namespace boxdim {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// Integers serialize as JSON numbers when they fit in 64 bits, decimal
// strings otherwise; rationals always as {"num": ..., "den": ...}.
json int_to_json(const Int& v);
Int int_from_json(const json& j);
json rat_to_json(const Rat& v);
Rat rat_from_json(const json& j);

json coords_to_json(const Coords& c);
Coords coords_from_json(const json& j);

json group_to_json(const GroupSpec& spec);
GroupSpec group_from_json(const json& j);

json chain_to_json(const SubgroupChain& chain);
SubgroupChain chain_from_json(const json& j);

json cover_to_json(const ColoredCover& cover);
ColoredCover cover_from_json(const json& j);

json decay_to_json(const DecayFamily& family);
DecayFamily decay_from_json(const json& j);

json check_to_json(const CheckResult& c);

// Certificate scaffolding: {claim, inputs, checks, verdict, tool_version}.
struct Certificate {
    std::string claim;
    json inputs = json::object();
    std::vector<CheckResult> checks;

    bool verdict() const;
    json to_json() const;
};

}  // namespace boxdim
