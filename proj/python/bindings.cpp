#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boxdim/dynamics.hpp"
#include "boxdim/io.hpp"

namespace py = pybind11;
using namespace boxdim;

namespace {

GroupSpec group_by_name(const std::string& name) {
    if (name == "z") return free_abelian(1);
    if (name == "z2") return free_abelian(2);
    if (name == "z3") return free_abelian(3);
    if (name == "z4") return free_abelian(4);
    if (name == "u3") return unitriangular(3);
    throw std::invalid_argument("unknown group: " + name);
}

SubgroupChain chain_by_name(const GroupSpec& g, const std::string& name) {
    if (name == "factorial") return factorial_abelian_chain(g);
    if (name == "scaled") return scaled_unitriangular_chain(g);
    if (name == "congruence") return congruence_unitriangular_chain(g);
    throw std::invalid_argument("unknown chain: " + name);
}

// Coordinates cross the boundary as 64-bit integer lists; everything in the
// shipped presets fits comfortably.
Coords to_coords(const std::vector<long long>& v) {
    Coords c;
    for (long long x : v) c.push_back(x);
    return c;
}

std::vector<long long> from_coords(const Coords& c) {
    std::vector<long long> v;
    for (const Int& x : c) v.push_back(x.convert_to<long long>());
    return v;
}

std::string checks_json(const std::string& claim,
                        const std::vector<CheckResult>& checks) {
    Certificate cert;
    cert.claim = claim;
    cert.checks = checks;
    return cert.to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_boxdim, m) {
    m.doc() = "exact certificates for box-space covers, decay functions and "
              "finite dynamical models";

    m.def("multiply",
          [](const std::string& group, const std::vector<long long>& a,
             const std::vector<long long>& b) {
              GroupSpec g = group_by_name(group);
              return from_coords(multiply(g, to_coords(a), to_coords(b)));
          },
          py::arg("group"), py::arg("a"), py::arg("b"));

    m.def("invert",
          [](const std::string& group, const std::vector<long long>& a) {
              GroupSpec g = group_by_name(group);
              return from_coords(invert(g, to_coords(a)));
          },
          py::arg("group"), py::arg("a"));

    m.def("word_length",
          [](const std::string& group, const std::vector<long long>& a,
             int radius_cap) {
              GroupSpec g = group_by_name(group);
              return word_distance(g, identity_of(g), to_coords(a), radius_cap);
          },
          py::arg("group"), py::arg("a"), py::arg("radius_cap") = 16);

    m.def("ball_size",
          [](const std::string& group, int radius) {
              GroupSpec g = group_by_name(group);
              return word_ball(g, identity_of(g), radius).size();
          },
          py::arg("group"), py::arg("radius"));

    m.def("chain_index",
          [](const std::string& group, const std::string& chain, int stage) {
              GroupSpec g = group_by_name(group);
              return chain_by_name(g, chain).index(stage).str();
          },
          py::arg("group"), py::arg("chain"), py::arg("stage"),
          "Index of the stage subgroup, as a decimal string.");

    m.def("quotient_distance",
          [](const std::string& group, const std::string& chain, int stage,
             const std::vector<long long>& x, const std::vector<long long>& y) {
              GroupSpec g = group_by_name(group);
              CosetSpace cs = coset_space(chain_by_name(g, chain), stage);
              return boxdim::quotient_distance(cs, to_coords(x), to_coords(y));
          },
          py::arg("group"), py::arg("chain"), py::arg("stage"), py::arg("x"),
          py::arg("y"));

    m.def("injective_stage",
          [](const std::string& group, const std::string& chain, int R, int n0,
             int n1) {
              GroupSpec g = group_by_name(group);
              auto res = injective_radius_stage(chain_by_name(g, chain), R, 0,
                                                n0, n1);
              return res.found ? res.stage : -1;
          },
          py::arg("group"), py::arg("chain"), py::arg("R"), py::arg("n0") = 1,
          py::arg("n1") = 8,
          "Least stage injective on the R-ball, or -1 if none in range.");

    m.def("window_diameters",
          [](const std::string& group, const std::string& chain, int n0,
             int n1) {
              GroupSpec g = group_by_name(group);
              BoxWindow w = box_window(chain_by_name(g, chain), n0, n1);
              std::vector<long long> out;
              for (auto& bs : w.blocks) out.push_back(bs.diameter());
              return out;
          },
          py::arg("group"), py::arg("chain"), py::arg("n0"), py::arg("n1"));

    m.def("synth_cover",
          [](const std::string& preset, int mm, int L, int k) {
              ColoredCover c;
              if (preset == "zm") c = synth_shifted_cover_zm(mm, L);
              else if (preset == "u3")
                  c = synth_scaled_cover_ud(3, k, u3_base_cover());
              else throw std::invalid_argument("unknown preset: " + preset);
              return cover_to_json(c).dump();
          },
          py::arg("preset"), py::arg("m") = 1, py::arg("L") = 8,
          py::arg("k") = 2, "Cover as a JSON document.");

    m.def("verify_cover",
          [](const std::string& cover_json, int window_radius, int R,
             int threads) {
              ColoredCover c = cover_from_json(json::parse(cover_json));
              GroupSpec g = c.group;
              Ball w = word_ball(g, identity_of(g), window_radius);
              CoverReport rep = boxdim::verify_cover(c, w, R, threads);
              return checks_json("cover verifies at scale " + std::to_string(R),
                                 rep.checks);
          },
          py::arg("cover_json"), py::arg("window_radius"), py::arg("R"),
          py::arg("threads") = 1, "Certificate as a JSON document.");

    m.def("decay_sup_shift",
          [](const std::string& cover_json, int window_radius) {
              ColoredCover c = cover_from_json(json::parse(cover_json));
              GroupSpec g = c.group;
              Ball w = word_ball(g, identity_of(g), window_radius);
              DecayFamily fam = cover_to_decay(c, w);
              DecayReport rep = verify_decay(fam, w, fam.scale_M,
                                             fam.tolerance_eps);
              if (!rep.pass())
                  throw std::runtime_error("decay family failed to verify");
              return rep.sup_shift.str();
          },
          py::arg("cover_json"), py::arg("window_radius"),
          "Measured sup-norm shift of the decay family, as a fraction.");

    m.def("tower_eps",
          [](const std::string& group, const std::string& chain, int n, int mm) {
              GroupSpec g = group_by_name(group);
              FiniteAction act = build_odometer(chain_by_name(g, chain), mm);
              TowerSystem ts = build_towers(act, n);
              TowerReport rep = verify_towers(ts, generators_of(g));
              if (!rep.pass())
                  throw std::runtime_error("tower conditions failed");
              return rep.eps.str();
          },
          py::arg("group"), py::arg("chain"), py::arg("n"), py::arg("m"),
          "Measured tower defect for the stage-m odometer cut at stage n.");

    m.def("growth_translator_count",
          [](const std::string& group) {
              GroupSpec g = group_by_name(group);
              GrowthCertificate cert = nilpotent_growth(g, generators_of(g));
              if (!verify_growth(cert).pass)
                  throw std::runtime_error("growth certificate failed");
              return cert.translators.size();
          },
          py::arg("group"));

    m.def("markers",
          [](int modulus, int f_lo, int f_hi, std::uint64_t seed) {
              GroupSpec z = free_abelian(1);
              SubgroupChain ch = custom_chain(z, {{Int(modulus)}});
              FiniteAction act = build_odometer(ch, 1);
              std::vector<Coords> F;
              for (int v = f_lo; v <= f_hi; ++v) F.push_back({v});
              MarkerResult res = marker_search(act, F, {{0}}, seed);
              if (!res.found) throw std::runtime_error("no marker set found");
              std::vector<long long> out;
              for (int id : res.Z)
                  out.push_back(
                      act.cs->reps[id][0].convert_to<long long>());
              std::sort(out.begin(), out.end());
              return out;
          },
          py::arg("modulus"), py::arg("f_lo"), py::arg("f_hi"),
          py::arg("seed") = 0, "Marker residues for the cyclic odometer.");

    m.def("tool_version", [] { return std::string(kToolVersion); });
}
