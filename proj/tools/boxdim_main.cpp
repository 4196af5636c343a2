#include "boxdim/dynamics.hpp"
#include "boxdim/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace boxdim;

namespace {

// exit codes: 0 verdict pass, 1 verdict fail, 2 usage or resource error
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

GroupSpec preset_group(const std::string& name) {
    if (name == "z") return free_abelian(1);
    if (name == "z2") return free_abelian(2);
    if (name == "z3") return free_abelian(3);
    if (name == "z4") return free_abelian(4);
    if (name == "u3") return unitriangular(3);
    throw std::invalid_argument("unknown group preset: " + name +
                                " (use z, z2, z3, z4, u3)");
}

SubgroupChain preset_chain(const GroupSpec& group, const std::string& name) {
    if (name == "factorial") return factorial_abelian_chain(group);
    if (name == "scaled") return scaled_unitriangular_chain(group);
    if (name == "congruence") return congruence_unitriangular_chain(group);
    throw std::invalid_argument("unknown chain preset: " + name +
                                " (use factorial, scaled, congruence)");
}

// The period-8 two-color demo cover of Z.
ColoredCover demo_cover() {
    ColoredCover c;
    c.group = free_abelian(1);
    c.period_divisors = {8};
    c.scale_R = 1;
    c.colors.push_back({explicit_base({{0}, {1}, {2}, {3}, {4}, {5}})});
    c.colors.push_back({explicit_base({{4}, {5}, {6}, {7}, {8}, {9}})});
    return c;
}

int emit(const Certificate& cert, const std::string& out) {
    json j = cert.to_json();
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << j.dump(2) << "\n";
    }
    return cert.verdict() ? kPass : kFail;
}

void emit_json(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << j.dump(2) << "\n";
    }
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::vector<CheckResult> cover_checks(const CoverReport& rep) {
    return rep.checks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-scale certificates for box-space geometry"};
    app.require_subcommand(1);

    std::string out, group_name = "z", chain_name = "factorial";
    int threads = 1;
    long long cap = 5000000;
    std::uint64_t seed = 0;

    // ---- group ----
    auto* g_cmd = app.add_subcommand("group", "word-metric balls in a preset group");
    auto* g_ball = g_cmd->add_subcommand("ball", "enumerate a word ball");
    int g_radius = 3;
    g_ball->add_option("--group", group_name, "z, z2, z3, z4 or u3");
    g_ball->add_option("--radius", g_radius, "ball radius");
    g_ball->add_option("--cap", cap, "element cap");
    g_ball->add_option("--out", out, "certificate file (default stdout)");

    // ---- chain ----
    auto* c_cmd = app.add_subcommand("chain", "subgroup chains and injectivity");
    auto* c_inspect = c_cmd->add_subcommand("inspect", "divisors and index of a stage");
    int c_stage = 1;
    c_inspect->add_option("--group", group_name);
    c_inspect->add_option("--chain", chain_name, "factorial, scaled or congruence");
    c_inspect->add_option("--stage", c_stage);
    c_inspect->add_option("--out", out);
    auto* c_inj = c_cmd->add_subcommand("injective", "first stage injective on B_R");
    int c_R = 2, c_conj = 0, c_n0 = 1, c_n1 = 8;
    c_inj->add_option("--group", group_name);
    c_inj->add_option("--chain", chain_name);
    c_inj->add_option("--R", c_R, "ball radius");
    c_inj->add_option("--conjugator-radius", c_conj);
    c_inj->add_option("--n0", c_n0);
    c_inj->add_option("--n1", c_n1);
    c_inj->add_option("--cap", cap);
    c_inj->add_option("--out", out);

    // ---- boxdist ----
    auto* b_cmd = app.add_subcommand("boxdist", "coarse-disjoint-union window metric");
    int b_n0 = 1, b_n1 = 3;
    b_cmd->add_option("--group", group_name);
    b_cmd->add_option("--chain", chain_name);
    b_cmd->add_option("--n0", b_n0);
    b_cmd->add_option("--n1", b_n1);
    b_cmd->add_option("--cap", cap);
    b_cmd->add_option("--out", out);

    // ---- cover ----
    auto* cover_cmd = app.add_subcommand("cover", "periodic colored covers");
    auto* cover_synth = cover_cmd->add_subcommand("synth", "write a preset cover");
    std::string cover_preset = "demo8";
    int synth_m = 1, synth_L = 8, synth_k = 2;
    cover_synth->add_option("--preset", cover_preset, "demo8, zm or u3");
    cover_synth->add_option("--m", synth_m, "rank for the zm preset (<= 4)");
    cover_synth->add_option("--L", synth_L, "cube side for the zm preset");
    cover_synth->add_option("--k", synth_k, "scaling exponent for the u3 preset");
    cover_synth->add_option("--out", out);
    auto* cover_verify = cover_cmd->add_subcommand("verify", "verify a cover file");
    std::string cover_file;
    int window_radius = 40, lebesgue_R = 1;
    cover_verify->add_option("file", cover_file, "cover JSON")->required();
    cover_verify->add_option("--window-radius", window_radius);
    cover_verify->add_option("--lebesgue", lebesgue_R, "scale R to certify");
    cover_verify->add_option("--threads", threads);
    cover_verify->add_option("--cap", cap);
    cover_verify->add_option("--out", out);

    // ---- decay ----
    auto* d_cmd = app.add_subcommand("decay", "decay-function partitions of unity");
    auto* d_build = d_cmd->add_subcommand("build", "cover file -> decay file");
    std::string decay_cover_file, decay_file;
    int d_window = 40;
    d_build->add_option("file", decay_cover_file, "cover JSON")->required();
    d_build->add_option("--window-radius", d_window);
    d_build->add_option("--out", out);
    auto* d_verify = d_cmd->add_subcommand("verify", "verify a decay file");
    int d_margin = 0;
    d_verify->add_option("file", decay_file, "decay JSON")->required();
    d_verify->add_option("--window-radius", d_window);
    d_verify->add_option("--margin", d_margin);
    d_verify->add_option("--out", out);
    auto* d_round = d_cmd->add_subcommand("roundtrip", "decay file -> verified cover");
    d_round->add_option("file", decay_file, "decay JSON")->required();
    d_round->add_option("--window-radius", d_window);
    d_round->add_option("--out", out);

    // ---- rokhlin ----
    auto* r_cmd = app.add_subcommand("rokhlin", "exact towers for odometers");
    auto* r_odo = r_cmd->add_subcommand("odometer", "towers of G/G_m over G/G_n");
    int r_stage = 3, r_sub = 2;
    r_odo->add_option("--group", group_name);
    r_odo->add_option("--chain", chain_name);
    r_odo->add_option("--stage", r_stage, "acted stage m");
    r_odo->add_option("--subgroup-stage", r_sub, "tower stage n");
    r_odo->add_option("--cap", cap);
    r_odo->add_option("--out", out);

    // ---- amdim ----
    auto* a_cmd = app.add_subcommand("amdim", "amenability-dimension witnesses");
    auto* a_prod = a_cmd->add_subcommand(
        "product", "tower x decay product witness on the Z/24 demo");
    a_prod->add_option("--out", out);
    auto* a_folner = a_cmd->add_subcommand(
        "folner", "Folner-averaged marker witness on the Z/24 demo");
    int a_jsize = 8;
    a_folner->add_option("--J", a_jsize, "Folner interval length");
    a_folner->add_option("--seed", seed, "marker search tie-breaking");
    a_folner->add_option("--out", out);

    // ---- growth ----
    auto* gr_cmd = app.add_subcommand("growth", "nilpotent growth certificates");
    int gr_mr = 1;
    gr_cmd->add_option("--group", group_name);
    gr_cmd->add_option("--M-radius", gr_mr, "M = word ball of this radius");
    gr_cmd->add_option("--out", out);

    // ---- marker ----
    auto* m_cmd = app.add_subcommand("marker", "marker sets for finite odometers");
    int m_mod = 12, m_flo = 0, m_fhi = 2;
    m_cmd->add_option("--modulus", m_mod);
    m_cmd->add_option("--f-lo", m_flo, "window start (inclusive)");
    m_cmd->add_option("--f-hi", m_fhi, "window end (inclusive)");
    m_cmd->add_option("--seed", seed);
    m_cmd->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (g_ball->parsed()) {
            GroupSpec spec = preset_group(group_name);
            Ball b = word_ball(spec, identity_of(spec), g_radius, static_cast<std::size_t>(cap));
            Certificate cert;
            cert.claim = "group.ball";
            cert.inputs = {{"group", group_to_json(spec)}, {"radius", g_radius}};
            cert.checks.push_back(
                {"ball-enumerated", true, "", std::to_string(b.size())});
            return emit(cert, out);
        }

        if (c_inspect->parsed()) {
            GroupSpec spec = preset_group(group_name);
            SubgroupChain ch = preset_chain(spec, chain_name);
            auto divs = ch.divisors(c_stage);
            json dv = json::array();
            for (const Int& d : divs) dv.push_back(int_to_json(d));
            Certificate cert;
            cert.claim = "chain.stage";
            cert.inputs = {{"chain", chain_to_json(ch)}, {"stage", c_stage}};
            cert.checks.push_back({"divisors", true, "", dv.dump()});
            cert.checks.push_back(
                {"index", true, "", ch.index(c_stage).str()});
            cert.checks.push_back(
                {"normal", true, "", ch.is_normal(c_stage) ? "true" : "false"});
            return emit(cert, out);
        }

        if (c_inj->parsed()) {
            GroupSpec spec = preset_group(group_name);
            SubgroupChain ch = preset_chain(spec, chain_name);
            auto res = injective_radius_stage(ch, c_R, c_conj, c_n0, c_n1,
                                              Int(cap));
            Certificate cert;
            cert.claim = "chain.injective-radius";
            cert.inputs = {{"chain", chain_to_json(ch)},
                           {"R", c_R},
                           {"conjugator_radius", c_conj},
                           {"n0", c_n0},
                           {"n1", c_n1}};
            CheckResult c{"stage-found", res.found, "", ""};
            if (res.found) {
                c.measured = std::to_string(res.stage);
            } else {
                c.witness = "collision " + coords_to_string(res.witness_a) +
                            " ~ " + coords_to_string(res.witness_b);
            }
            cert.checks.push_back(c);
            return emit(cert, out);
        }

        if (b_cmd->parsed()) {
            GroupSpec spec = preset_group(group_name);
            SubgroupChain ch = preset_chain(spec, chain_name);
            BoxWindow w = box_window(ch, b_n0, b_n1, Int(cap));
            Certificate cert;
            cert.claim = "boxdist.window";
            cert.inputs = {{"chain", chain_to_json(ch)},
                           {"n0", b_n0},
                           {"n1", b_n1}};
            json dia = json::array(), sep = json::array();
            for (int d : w.diameters) dia.push_back(d);
            for (const Int& s : w.separation) sep.push_back(int_to_json(s));
            cert.checks.push_back({"diameters", true, "", dia.dump()});
            cert.checks.push_back({"separations", true, "", sep.dump()});
            return emit(cert, out);
        }

        if (cover_synth->parsed()) {
            ColoredCover cover;
            if (cover_preset == "demo8") {
                cover = demo_cover();
            } else if (cover_preset == "zm") {
                if (synth_m < 1 || synth_m > 4)
                    throw std::invalid_argument("zm preset needs 1 <= m <= 4");
                cover = synth_shifted_cover_zm(synth_m, synth_L);
            } else if (cover_preset == "u3") {
                cover = synth_scaled_cover_ud(3, synth_k, u3_base_cover());
            } else {
                throw std::invalid_argument("unknown cover preset: " +
                                            cover_preset);
            }
            emit_json(cover_to_json(cover), out);
            return kPass;
        }

        if (cover_verify->parsed()) {
            ColoredCover cover = cover_from_json(load_json(cover_file));
            Ball window = word_ball(cover.group, identity_of(cover.group),
                                    window_radius, static_cast<std::size_t>(cap));
            CoverReport rep = verify_cover(cover, window, lebesgue_R, threads);
            Certificate cert;
            cert.claim = "cover.lebesgue";
            cert.inputs = {{"cover", cover_to_json(cover)},
                           {"window_radius", window_radius},
                           {"R", lebesgue_R}};
            cert.checks = cover_checks(rep);
            return emit(cert, out);
        }

        if (d_build->parsed()) {
            ColoredCover cover = cover_from_json(load_json(decay_cover_file));
            Ball window = word_ball(cover.group, identity_of(cover.group),
                                    d_window);
            DecayFamily fam = cover_to_decay(cover, window);
            emit_json(decay_to_json(fam), out);
            return kPass;
        }

        if (d_verify->parsed()) {
            DecayFamily fam = decay_from_json(load_json(decay_file));
            Ball window = word_ball(fam.group, identity_of(fam.group), d_window);
            DecayReport rep =
                verify_decay(fam, window, fam.scale_M, fam.tolerance_eps,
                             d_margin);
            Certificate cert;
            cert.claim = "decay.partition";
            cert.inputs = {{"decay", decay_to_json(fam)},
                           {"window_radius", d_window}};
            cert.checks = rep.checks;
            return emit(cert, out);
        }

        if (d_round->parsed()) {
            DecayFamily fam = decay_from_json(load_json(decay_file));
            Ball window = word_ball(fam.group, identity_of(fam.group), d_window);
            auto rt = decay_to_cover(fam, window);
            Certificate cert;
            cert.claim = "decay.roundtrip";
            cert.inputs = {{"window_radius", d_window}};
            cert.checks.push_back({"cover-reverified", rt.verified_R >= 1, "",
                                   "R = " + std::to_string(rt.verified_R)});
            return emit(cert, out);
        }

        if (r_odo->parsed()) {
            GroupSpec spec = preset_group(group_name);
            SubgroupChain ch = preset_chain(spec, chain_name);
            FiniteAction act = build_odometer(ch, r_stage, Int(cap));
            TowerSystem ts = build_towers(act, r_sub, Int(cap));
            TowerReport rep = verify_towers(ts, generators_of(spec));
            Certificate cert;
            cert.claim = "tower.exact";
            cert.inputs = {{"chain", chain_to_json(ch)},
                           {"stage", r_stage},
                           {"subgroup_stage", r_sub}};
            cert.checks = rep.checks;
            cert.checks.push_back(
                {"epsilon", rep.eps == 0, "", rat_to_json(rep.eps).dump()});
            return emit(cert, out);
        }

        if (a_prod->parsed() || a_folner->parsed()) {
            GroupSpec z = free_abelian(1);
            SubgroupChain ch = custom_chain(z, {{8}, {24}});
            FiniteAction act = build_odometer(ch, 2);
            AmdimWitness w;
            Certificate cert;
            if (a_prod->parsed()) {
                TowerSystem ts = build_towers(act, 1);
                Ball window = word_ball(z, {0}, 40);
                DecayFamily fam = cover_to_decay(demo_cover(), window);
                w = build_amdim_witness_product(ts, fam);
                cert.claim = "amdim.witness.product";
            } else {
                GrowthCertificate growth =
                    nilpotent_growth(z, {{-1}, {0}, {1}});
                MarkerResult markers =
                    marker_search(act, growth.F, {{0}}, seed);
                std::vector<Coords> J;
                for (Int i = 0; i < a_jsize; ++i) J.push_back({i});
                w = build_amdim_witness_folner(act, growth, markers, J);
                cert.claim = "amdim.witness.folner";
            }
            WitnessReport rep = verify_witness(w);
            SimplicialReport sm = witness_to_simplicial_map(w);
            cert.inputs = {{"families", w.am_d + 1},
                           {"eps", rat_to_json(w.eps)}};
            cert.checks = rep.checks;
            cert.checks.push_back({"simplicial-defect", sm.pass, "",
                                   rat_to_json(sm.measured_defect).dump() +
                                       " <= " + rat_to_json(sm.bound).dump()});
            return emit(cert, out);
        }

        if (gr_cmd->parsed()) {
            GroupSpec spec = preset_group(group_name);
            Ball mb = word_ball(spec, identity_of(spec), gr_mr);
            GrowthCertificate cert0 = nilpotent_growth(spec, mb.elements);
            auto chk = verify_growth(cert0);
            Certificate cert;
            cert.claim = "growth.certificate";
            cert.inputs = {{"group", group_to_json(spec)},
                           {"M_radius", gr_mr}};
            cert.checks.push_back(
                {"translator-count", true, "",
                 std::to_string(cert0.translators.size())});
            CheckResult c{"coverage", chk.pass, "", ""};
            if (!chk.pass)
                c.witness = coords_to_string(chk.witness_x) + " via " +
                            coords_to_string(chk.witness_mx);
            cert.checks.push_back(c);
            return emit(cert, out);
        }

        if (m_cmd->parsed()) {
            if (m_mod < 2) throw std::invalid_argument("modulus must be >= 2");
            SubgroupChain ch = custom_chain(free_abelian(1), {{m_mod}});
            FiniteAction act = build_odometer(ch, 1);
            std::vector<Coords> F;
            for (int i = m_flo; i <= m_fhi; ++i) F.push_back({i});
            MarkerResult res = marker_search(act, F, {{0}}, seed);
            Certificate cert;
            cert.claim = "marker.search";
            cert.inputs = {{"modulus", m_mod},
                           {"F_lo", m_flo},
                           {"F_hi", m_fhi},
                           {"seed", seed}};
            std::vector<Int> residues;
            for (int zid : res.Z) residues.push_back(act.cs->reps[zid][0]);
            std::sort(residues.begin(), residues.end());
            json zj = json::array();
            for (const Int& r : residues) zj.push_back(int_to_json(r));
            CheckResult c{"markers-cover", res.found, "", zj.dump()};
            if (!res.found)
                c.witness =
                    "uncovered point id " + std::to_string(res.uncovered[0]);
            cert.checks.push_back(c);
            return emit(cert, out);
        }

        std::cerr << "no subcommand executed\n";
        return kError;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
}
