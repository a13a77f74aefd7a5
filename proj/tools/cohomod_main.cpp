// cohomod: exact mod-p cohomology of small p-groups with completion
// certificates, plus a standalone analyzer for filter-regular parameter
// systems over finitely presented graded-commutative rings.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cohomod/complete.hpp"
#include "cohomod/dickson.hpp"
#include "cohomod/io.hpp"
#include "cohomod/regseq.hpp"

namespace {

using cohomod::io::json;

constexpr int kExitComplete = 0;
constexpr int kExitCaps = 2;
constexpr int kExitParse = 64;
constexpr int kExitSemantic = 65;

void emit(const json& report, const std::string& json_path) {
    if (!json_path.empty()) cohomod::io::write_json_file(json_path, report);
}

std::string flags_line(const cohomod::RegularityFlags& f) {
    std::string s;
    s += f.quasi ? "quasi-regular " : "";
    s += f.strongly ? "strongly " : "";
    s += f.very_strongly ? "very-strongly" : "";
    return s.empty() ? "(none)" : s;
}

int cmd_cohomology(const std::string& group_file, const std::string& params_file,
                   cohomod::PipelineCaps caps, bool strict_flag,
                   bool nonstrict_flag, bool assume_depth2,
                   const std::string& json_path) {
    json gj = cohomod::io::read_json_file(group_file);
    cohomod::PGroup g = cohomod::io::load_group(gj, caps.order_cap);

    if (nonstrict_flag) {
        if (cohomod::center_rank(g) < 2 && !assume_depth2) {
            std::cerr << "cohomod: --nonstrict needs center rank >= 2 "
                         "(verified) or --assume-depth2\n";
            return kExitSemantic;
        }
        caps.force_strict = false;
    }
    if (strict_flag) caps.force_strict = true;

    std::vector<cohomod::SparsePoly> user_params;
    if (!params_file.empty())
        user_params = cohomod::io::load_hsop(cohomod::io::read_json_file(params_file));

    cohomod::PipelineReport rep = cohomod::compute_until_complete(g, caps, user_params);

    json out;
    out["command"] = "cohomology";
    out["inputs"] = {{"group", cohomod::io::file_digest(group_file)}};
    if (!params_file.empty())
        out["inputs"]["params"] = cohomod::io::file_digest(params_file);
    out["p"] = g.p;
    out["order"] = g.order;
    out["p_rank"] = rep.p_rank;
    out["center_rank"] = rep.center_rank;
    out["complete"] = rep.complete;
    out["mode"] = rep.mode;
    out["N"] = rep.N;
    out["ranks"] = rep.ranks;
    out["presentation"] = cohomod::io::ring_to_json(rep.presentation.base);
    out["params"] = cohomod::io::params_to_json(rep.params);
    out["dilation"] = rep.dilation;
    if (rep.verdict) out["verdict"] = cohomod::io::verdict_to_json(*rep.verdict);
    if (rep.sharpened_type) {
        out["sharpened_type"] = cohomod::io::type_to_json(*rep.sharpened_type);
        auto flags = cohomod::classify(*rep.sharpened_type, rep.p_rank);
        out["flags"] = {{"quasi", flags.quasi},
                        {"strongly", flags.strongly},
                        {"very_strongly", flags.very_strongly}};
    }
    emit(out, json_path);

    std::cout << "group of order " << g.order << " at p = " << g.p
              << ", p-rank " << rep.p_rank << ", center rank "
              << rep.center_rank << "\n";
    if (rep.complete) {
        std::cout << "complete at N = " << rep.N << " (" << rep.mode << ")\n";
    } else {
        std::cout << "incomplete at caps (N = " << rep.N << ")\n";
    }
    std::cout << "generators:";
    for (const auto& gen : rep.presentation.base.gens)
        std::cout << " " << gen.name << "(" << gen.degree << ")";
    std::cout << "\nrelations: " << rep.presentation.base.relations.size() << "\n";
    auto names = rep.presentation.base.names();
    for (const auto& r : rep.presentation.base.relations)
        std::cout << "  " << cohomod::poly_to_string(r, names) << "\n";
    if (!rep.params.elements.empty()) {
        std::cout << "parameters:";
        for (std::size_t i = 0; i < rep.params.size(); ++i)
            std::cout << " " << cohomod::poly_to_string(rep.params.elements[i], names);
        std::cout << "\n";
    }
    double total = 0;
    for (double s : rep.degree_seconds) total += s;
    std::cout << "time: " << total << " s over " << rep.degree_seconds.size()
              << " degrees\n";
    return rep.complete ? kExitComplete : kExitCaps;
}

int cmd_analyze_ring(const std::string& ring_file, const std::string& hsop_file,
                     int bound, const std::string& mode_name,
                     const std::string& json_path) {
    cohomod::GradedPresentation pres =
        cohomod::io::load_ring(cohomod::io::read_json_file(ring_file));
    auto raw = cohomod::io::load_hsop(cohomod::io::read_json_file(hsop_file));
    cohomod::PolyRing ring = pres.ring();
    std::vector<cohomod::Poly> polys;
    for (const auto& sp : raw) polys.push_back(sp.to_poly(ring));
    cohomod::ParameterSequence params = cohomod::make_parameters(pres, polys);

    cohomod::MeasureMode mode = mode_name == "bounded"
                                    ? cohomod::MeasureMode::bounded
                                    : cohomod::MeasureMode::certified;
    auto m = cohomod::measure_type(pres, params, bound, mode);
    auto rep = cohomod::local_cohomology_report(pres, params, m);
    auto flags = cohomod::classify(m.envelope, m.r);

    json out;
    out["command"] = "analyze-ring";
    out["inputs"] = {{"ring", cohomod::io::file_digest(ring_file)},
                     {"hsop", cohomod::io::file_digest(hsop_file)}};
    out["r"] = m.r;
    out["param_degrees"] = m.param_degrees;
    out["type"] = cohomod::io::type_to_json(m.measured);
    out["envelope"] = cohomod::io::type_to_json(m.envelope);
    out["flags"] = {{"quasi", flags.quasi},
                    {"strongly", flags.strongly},
                    {"very_strongly", flags.very_strongly}};
    json abounds = json::array();
    for (const auto& b : cohomod::a_invariant_bounds(m))
        abounds.push_back(cohomod::io::extint_to_json(b));
    out["a_bounds"] = abounds;
    out["depth"] = rep.depth;
    out["mode"] = m.certified ? "certified" : "bounded";
    out["window"] = m.window;
    out["quotient_top"] = m.quotient_top;
    if (m.certified && m.rmod) {
        out["reg"] = cohomod::io::extint_to_json(rep.reg_exact);
        out["a_max"] = cohomod::io::extint_to_json(rep.a_max_exact);
        out["a0"] = cohomod::io::extint_to_json(rep.a0_exact);
        out["betti"] = cohomod::io::betti_to_json(m.rmod->betti);
        json gd = json::array();
        for (const auto& degs : m.rmod->generator_degrees) gd.push_back(degs);
        out["generator_degrees"] = gd;
    } else {
        out["reg_bound"] = cohomod::io::extint_to_json(cohomod::regularity_bound(m));
        out["note"] = m.note;
    }
    emit(out, json_path);

    std::cout << "measured type: " << cohomod::io::type_to_json(m.measured).dump()
              << "\nenvelope:      " << cohomod::io::type_to_json(m.envelope).dump()
              << "\nflags: " << flags_line(flags) << "\ndepth: " << rep.depth
              << "\nmode: " << (m.certified ? "certified" : "bounded") << "\n";
    if (m.certified && m.rmod) {
        std::cout << "Reg = " << rep.reg_exact.str()
                  << ", max a^i = " << rep.a_max_exact.str()
                  << ", a^0 = " << rep.a0_exact.str() << "\n";
        std::cout << "betti: " << cohomod::io::betti_to_json(m.rmod->betti).dump()
                  << "\n";
    } else {
        std::cout << "Reg <= "
                  << cohomod::regularity_bound(m).str() << " (" << m.note << ")\n";
    }
    return kExitComplete;
}

int cmd_dickson(std::uint32_t p, std::size_t r, int gen_degree,
                const std::string& json_path) {
    if (gen_degree == 0) gen_degree = (p == 2) ? 1 : 2;
    cohomod::DicksonSet d = cohomod::dickson_set(p, r, gen_degree);
    if (!cohomod::verify_gl_invariance(d))
        throw std::logic_error("dickson: invariance verification failed");

    json out;
    out["command"] = "dickson";
    out["p"] = p;
    out["r"] = r;
    out["gen_degree"] = d.gen_degree;
    out["invariants"] = json::array();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < r; ++i) names.push_back("x" + std::to_string(i + 1));
    for (std::size_t j = 1; j <= r; ++j) {
        json inv;
        inv["name"] = "c_{" + std::to_string(r) + "," + std::to_string(r - j) + "}";
        inv["degree"] = d.graded_degree(j);
        inv["poly"] = cohomod::io::poly_to_json(d.coeffs[j - 1]);
        out["invariants"].push_back(inv);
        std::cout << inv["name"].get<std::string>() << " (degree "
                  << d.graded_degree(j)
                  << ") = " << cohomod::poly_to_string(d.coeffs[j - 1], names)
                  << "\n";
    }
    emit(out, json_path);
    return kExitComplete;
}

int cmd_koszul(const std::string& ring_file, const std::string& hsop_file,
               int window, const std::string& json_path) {
    cohomod::GradedPresentation pres =
        cohomod::io::load_ring(cohomod::io::read_json_file(ring_file));
    auto raw = cohomod::io::load_hsop(cohomod::io::read_json_file(hsop_file));
    cohomod::PolyRing ring = pres.ring();
    std::vector<cohomod::Poly> polys;
    for (const auto& sp : raw) polys.push_back(sp.to_poly(ring));
    cohomod::ParameterSequence params = cohomod::make_parameters(pres, polys);
    auto rep = cohomod::koszul_cohomology(pres, params, window);

    json out;
    out["command"] = "koszul";
    out["inputs"] = {{"ring", cohomod::io::file_digest(ring_file)},
                     {"hsop", cohomod::io::file_digest(hsop_file)}};
    out["r"] = rep.r;
    out["window"] = rep.window;
    out["param_degrees"] = rep.param_degrees;
    out["table"] = rep.dims;
    emit(out, json_path);

    for (std::size_t s = 0; s <= rep.r; ++s) {
        std::cout << "H^{-" << s << ",t}:";
        for (int t = 0; t <= window; ++t) std::cout << " " << rep.dims[s][t];
        std::cout << "\n";
    }
    return kExitComplete;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact cohomology of small p-groups with completion certificates"};
    app.require_subcommand(1);

    // cohomology
    std::string group_file, params_file, json_path, dilation_csv;
    cohomod::PipelineCaps caps;
    bool strict_flag = false, nonstrict_flag = false, assume_depth2 = false;
    long max_dim = 0;
    auto* coh = app.add_subcommand("cohomology",
                                   "compute H*(G,k) until provably complete");
    coh->add_option("group", group_file, "group JSON file")->required();
    coh->add_option("--params", params_file, "parameter system JSON (overrides search)");
    coh->add_option("--max-degree", caps.max_degree, "resolution degree cap");
    coh->add_option("--max-dim", max_dim, "matrix dimension cap");
    coh->add_option("--bound", caps.cert_bound, "certification degree bound");
    coh->add_option("--dilation", dilation_csv, "force dilation exponents a1,a2,...");
    coh->add_option("--order-cap", caps.order_cap, "group order cap");
    coh->add_flag("--strict", strict_flag, "force the strict inequality");
    coh->add_flag("--nonstrict", nonstrict_flag,
                  "use the relaxed inequality (needs center rank >= 2)");
    coh->add_flag("--assume-depth2", assume_depth2,
                  "assert depth >= 2 without verification (with --nonstrict)");
    coh->add_option("--json", json_path, "write the machine report here");

    // analyze-ring
    std::string ring_file, hsop_file, mode_name = "certified";
    int bound = 24, window = 12;
    auto* ana = app.add_subcommand("analyze-ring",
                                   "filter-regularity analysis of a ring/hsop pair");
    ana->add_option("ring", ring_file, "ring JSON file")->required();
    ana->add_option("hsop", hsop_file, "parameter JSON file")->required();
    ana->add_option("--bound", bound, "degree bound");
    ana->add_option("--mode", mode_name, "certified or bounded")
        ->check(CLI::IsMember({"certified", "bounded"}));
    ana->add_option("--json", json_path, "write the machine report here");

    // dickson
    std::uint32_t dp = 2;
    std::size_t dr = 1;
    int gen_degree = 0;
    auto* dic = app.add_subcommand("dickson", "invariant polynomials for GL(r, F_p)");
    dic->add_option("-p", dp, "prime")->required();
    dic->add_option("-r", dr, "rank")->required();
    dic->add_option("--gen-degree", gen_degree, "generator degree (default 1 at p=2, else 2)");
    dic->add_option("--json", json_path, "write the machine report here");

    // koszul
    auto* kos = app.add_subcommand("koszul", "bigraded Koszul cohomology table");
    kos->add_option("ring", ring_file, "ring JSON file")->required();
    kos->add_option("hsop", hsop_file, "parameter JSON file")->required();
    kos->add_option("--window", window, "vertical degree window");
    kos->add_option("--json", json_path, "write the machine report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (coh->parsed()) {
            if (max_dim > 0)
                caps.max_matrix_entries =
                    static_cast<std::size_t>(max_dim) * static_cast<std::size_t>(max_dim);
            if (!dilation_csv.empty()) {
                std::stringstream ss(dilation_csv);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    caps.forced_dilation.push_back(std::stoi(tok));
            }
            return cmd_cohomology(group_file, params_file, caps, strict_flag,
                                  nonstrict_flag, assume_depth2, json_path);
        }
        if (ana->parsed())
            return cmd_analyze_ring(ring_file, hsop_file, bound, mode_name, json_path);
        if (dic->parsed()) return cmd_dickson(dp, dr, gen_degree, json_path);
        if (kos->parsed()) return cmd_koszul(ring_file, hsop_file, window, json_path);
    } catch (const cohomod::io::ParseError& e) {
        std::cerr << "cohomod: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cohomod: " << e.what() << "\n";
        return kExitSemantic;
    } catch (const std::exception& e) {
        std::cerr << "cohomod: " << e.what() << "\n";
        return kExitSemantic;
    }
    return kExitComplete;
}
