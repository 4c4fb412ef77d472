#include "obstructa/cli.hpp"

#include <CLI11.hpp>
#include <fstream>

#include "obstructa/ce_dual.hpp"
#include "obstructa/cyclic.hpp"
#include "obstructa/errors.hpp"
#include "obstructa/examples.hpp"
#include "obstructa/hochschild.hpp"
#include "obstructa/report.hpp"

namespace obstructa {

namespace {

struct Options {
    std::string spec_path;
    std::string out_path;
    std::string emax = "3";
    int lmax = 4;
    int kmax = 8;
    std::string degrees;
    std::string mode = "z";
    std::string format = "text";
    bool no_credit = false;
    int columns = 4;
    bool normalized = false;
    std::string example_name;
    int samples = 20;
    unsigned seed = 2026;
};

Window window_from(const Options& o, const AlgebraSpec& a) {
    Window w;
    w.lmax = o.lmax;
    w.emax = parse_rat(o.emax);
    w.kmax = o.kmax;
    if (!o.degrees.empty()) {
        auto dots = o.degrees.find("..");
        if (dots == std::string::npos)
            throw ConfigError("--degrees expects the form a..b");
        w.deg_lo = std::stoi(o.degrees.substr(0, dots));
        w.deg_hi = std::stoi(o.degrees.substr(dots + 2));
    }
    // energy-credited windows keep filtered truncations exact by default
    w.credit_length = !o.no_credit && a.energy_gcd() > 0;
    return w;
}

AlgebraSpec load_for(const Options& o) {
    if (o.spec_path.empty()) throw ConfigError("--spec <path> is required for this verb");
    auto loaded = load_spec_file(o.spec_path);
    if (!loaded.algebra) throw ConfigError("spec file does not hold an algebra spec");
    AlgebraSpec a = *loaded.algebra;
    if (o.mode == "z2") a = to_z2_mode(a);
    auto v = validate_spec(a);
    if (!v.ok()) {
        std::string msg = "invalid spec:";
        for (const auto& s : v.violations) msg += "\n  " + s;
        throw ConfigError(msg);
    }
    return a;
}

ReportFormat fmt_of(const Options& o) {
    return o.format == "records" ? ReportFormat::Records : ReportFormat::Text;
}

void write_out(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path);
    if (!f) throw Error("cannot write '" + o.out_path + "'");
    f << text;
}

int emit_homology(const Options& o, const HomologyReport& rep, std::ostream& out) {
    Report r(fmt_of(o), rep.window, rep.space);
    r.dims(rep.rows);
    r.graded(rep.graded);
    for (const auto& c : rep.certificates) r.note(c);
    std::ostringstream os;
    r.emit(os);
    write_out(o, os.str(), out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"obstructa: exact engine for gapped filtered A-infinity algebras over "
                 "truncated Novikov coefficients"};
    app.require_subcommand(1);

    Options o;
    app.add_option("--spec", o.spec_path, "spec file (JSON schema)");
    app.add_option("--out", o.out_path, "write the report or spec here");
    app.add_option("--emax", o.emax, "energy ceiling (rational)");
    app.add_option("--lmax", o.lmax, "max tensor length");
    app.add_option("--kmax", o.kmax, "max operation arity consumed");
    app.add_option("--degrees", o.degrees, "degree range a..b");
    app.add_option("--mode", o.mode, "grading mode: z or z2")
        ->check(CLI::IsMember({"z", "z2"}));
    app.add_option("--format", o.format, "output format: text or records")
        ->check(CLI::IsMember({"text", "records"}));
    app.add_flag("--no-credit", o.no_credit,
                 "plain length cutoff instead of energy-credited windows");
    app.add_option("--columns", o.columns, "bicomplex column/diagonal truncation");
    app.add_flag("--normalized", o.normalized, "normalized (b,B) complex");
    app.add_option("--samples", o.samples, "cocycle sample count for vanish");
    app.add_option("--seed", o.seed, "sampling seed");

    auto* validate = app.add_subcommand("validate", "validate a spec file");
    auto* bar = app.add_subcommand("bar", "bar complex homology");
    auto* cyc = app.add_subcommand("cyclic", "cyclic homology (B^cyc_{>=1}, d)");
    auto* sym = app.add_subcommand("sym", "symmetric bar homology (E_{>=1}C, d)");
    auto* hoch = app.add_subcommand("hochschild", "Hochschild homology of the diagonal");
    auto* redhoch =
        app.add_subcommand("reduced-hochschild", "reduced Hochschild homology");
    auto* ce = app.add_subcommand("ce", "Chevalley-Eilenberg chain homology");
    auto* cycce = app.add_subcommand("cyclic-ce", "cyclic Chevalley-Eilenberg homology");
    auto* dualce = app.add_subcommand("dual-ce", "dual CE cohomology dims");
    auto* bicheck = app.add_subcommand("bicomplex-check", "b(1-t)=(1-t)b', b'N=Nb");
    auto* bb = app.add_subcommand("bb-complex", "(b,B) total complex homology");
    auto* alpha = app.add_subcommand("alpha", "the alpha cycle and its certificate");
    auto* gamma = app.add_subcommand("gamma", "the gamma cycle and its certificate");
    auto* mc = app.add_subcommand("mc-check", "solve and check a bounding cochain");
    auto* deformv = app.add_subcommand("deform", "deform by the solved bounding cochain");
    auto* vanish = app.add_subcommand("vanish", "primary obstructions and vanishing");
    auto* pages = app.add_subcommand("pages", "energy spectral sequence pages 1 and 2");
    auto* example = app.add_subcommand("example", "emit a shipped example spec");
    std::string exname;
    example->add_option("name", exname, "E-zero|E-free|E1|E2|E3|E4")->required();

    std::vector<const char*> argv;
    std::string prog = "obstructa";
    argv.push_back(prog.c_str());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        int code = app.exit(e, os, os);
        (code == 0 ? out : err) << os.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (example->parsed()) {
            AlgebraSpec a = build_example(exname);
            write_out(o, save_algebra(a), out);
            return 0;
        }
        if (validate->parsed()) {
            if (o.spec_path.empty()) throw ConfigError("--spec <path> is required");
            auto loaded = load_spec_file(o.spec_path);
            ValidationReport rep;
            std::string kind;
            if (loaded.algebra) {
                kind = "algebra";
                AlgebraSpec a = *loaded.algebra;
                if (o.mode == "z2") a = to_z2_mode(a);
                rep = validate_spec(a);
                if (a.unit_index() >= 0) {
                    auto u = unit_check(a);
                    rep.violations.insert(rep.violations.end(), u.violations.begin(),
                                          u.violations.end());
                }
            } else if (loaded.bimodule) {
                kind = "bimodule";
                rep = validate_bimodule(*loaded.bimodule);
            } else {
                kind = "homomorphism";
                rep = validate_hom(*loaded.homomorphism);
            }
            Window w;
            Report r(fmt_of(o), w, "validate");
            r.kv("kind", kind);
            r.kv("violations", std::to_string(rep.violations.size()));
            for (const auto& v : rep.violations) r.note(v);
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return rep.ok() ? 0 : 1;
        }

        AlgebraSpec a = load_for(o);
        Window w = window_from(o, a);

        if (bar->parsed()) {
            auto cx = assemble(enumerate_window(SpaceKind::Bar, a, w),
                               [&](const Word& word) {
                                   Window exact = w;
                                   exact.lmax = 1 << 20;
                                   SignedVector v(Flavor::Plain, w.emax);
                                   v.add(word, NovikovScalar::one(w.emax));
                                   return dhat_apply(a, v, exact);
                               });
            auto rep = homology(cx);
            rep.space = "bar";
            return emit_homology(o, rep, out);
        }
        if (cyc->parsed()) return emit_homology(o, cyclic_homology(a, w), out);
        if (sym->parsed() || cycce->parsed()) {
            auto l = symmetrize_algebra(a, std::min(w.kmax, w.lmax + 1));
            auto rep = cyclic_ce_homology(l, w);
            rep.space = sym->parsed() ? "sym" : "cyclic-ce";
            return emit_homology(o, rep, out);
        }
        if (hoch->parsed())
            return emit_homology(o, hochschild_homology(a, diagonal_bimodule(a), w), out);
        if (redhoch->parsed())
            return emit_homology(o, reduced_hochschild_homology(a, diagonal_bimodule(a), w),
                                 out);
        if (ce->parsed()) {
            auto lm = lmodule_from_bimodule(diagonal_bimodule(a), w);
            return emit_homology(o, ce_chain_homology(lm, w), out);
        }
        if (dualce->parsed()) {
            auto l = symmetrize_algebra(a, std::min(w.kmax, w.lmax + 1));
            auto cx = cyclic_ce_complex(l, w);
            if (!cx.clean()) throw RefusalError("dual-ce refused on a dirty ledger");
            Report r(fmt_of(o), w, "dual-ce");
            r.dims(dual_cohomology_dims(cx));
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return 0;
        }
        if (bicheck->parsed()) {
            auto rep = bicomplex_identities(a, w);
            Report r(fmt_of(o), w, "bicomplex-check");
            r.defects(rep, a.ids());
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return rep.empty() ? 0 : 1;
        }
        if (bb->parsed()) {
            auto data = connes_B(a, w);
            Report r(fmt_of(o), w, "bb-complex");
            r.kv("stilde_identity", data.base.ok ? "holds" : "fails");
            r.kv("b_squared", data.b_squared_zero ? "0" : "nonzero");
            r.kv("B_squared", data.B_squared_zero ? "0" : "nonzero");
            r.kv("anticommutator", data.anticommute ? "0" : "nonzero");
            auto tot = bb_total_homology(a, w, o.columns, o.normalized);
            r.dims(tot.rows);
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return data.base.ok && data.b_squared_zero && data.B_squared_zero &&
                           data.anticommute
                       ? 0
                       : 1;
        }
        if (alpha->parsed()) {
            auto rep = alpha_build(a, w);
            Report r(fmt_of(o), w, "alpha");
            r.kv("kmax", std::to_string(rep.kmax));
            r.kv("per_k_identity", rep.per_k_ok ? "holds" : "fails");
            r.kv("cycle", rep.cycle_ok ? "d(alpha) = 0 within window" : "fails");
            r.kv("certificate",
                 rep.certificate.certified ? "leading term not a boundary" : "refuted");
            r.note(rep.certificate.detail);
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return rep.per_k_ok && rep.cycle_ok && rep.certificate.certified ? 0 : 1;
        }
        if (gamma->parsed()) {
            auto g = build_gamma(a, w);
            Window exact = w;
            exact.lmax = 1 << 20;
            bool cycle = dhat_apply(a, g, exact).is_zero();
            auto cx = assemble(enumerate_window(SpaceKind::Bar, a, w),
                               [&](const Word& word) {
                                   SignedVector v(Flavor::Plain, w.emax);
                                   v.add(word, NovikovScalar::one(w.emax));
                                   return dhat_apply(a, v, exact);
                               });
            Report r(fmt_of(o), w, "gamma");
            r.kv("cycle", cycle ? "d(gamma) = 0 within window" : "fails");
            if (cx.clean()) {
                auto cert = nonboundary_certificate(cx, g);
                r.kv("certificate", cert.certified ? "leading term 1 not a boundary"
                                                   : "refuted");
                r.note(cert.detail);
                std::ostringstream os;
                r.emit(os);
                write_out(o, os.str(), out);
                return cycle && cert.certified ? 0 : 1;
            }
            r.note("window ledger dirty; certificate skipped (use credit windows)");
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return 1;
        }
        if (mc->parsed()) {
            Report r(fmt_of(o), w, "mc-check");
            try {
                auto b = solve_bounding_cochain(a, w);
                r.kv("bounding_cochain", b.str(a.ids()));
                r.kv("residual", mc_defect(a, b, w).str(a.ids()));
                std::ostringstream os;
                r.emit(os);
                write_out(o, os.str(), out);
                return 0;
            } catch (const DomainError& e) {
                r.kv("obstructed", e.what());
                std::ostringstream os;
                r.emit(os);
                write_out(o, os.str(), out);
                return 1;
            }
        }
        if (deformv->parsed()) {
            auto b = solve_bounding_cochain(a, w);
            auto def = deform(a, b, w);
            Report r(fmt_of(o), w, "deform");
            r.kv("bounding_cochain", b.str(a.ids()));
            r.kv("valid", validate_spec(def).ok() ? "yes" : "no");
            r.kv("structure_defects",
                 ainfty_defect(def, w).empty() ? "none" : "nonzero");
            std::ostringstream os;
            r.emit(os);
            if (!o.out_path.empty()) {
                std::ofstream f(o.out_path);
                f << save_algebra(def);
                out << os.str();
            } else {
                out << os.str();
            }
            return 0;
        }
        if (vanish->parsed()) {
            auto rep = obstruction_extract(a, w);
            Report r(fmt_of(o), w, "vanish");
            if (!rep.has_obstruction) {
                r.kv("obstruction", "none (m0 = 0)");
                std::ostringstream os;
                r.emit(os);
                write_out(o, os.str(), out);
                return 0;
            }
            r.kv("lambda_min", to_string(rep.lambda_min));
            for (const auto& e : rep.entries)
                r.row({{"class", e.class_label},
                       {"cycle", e.cycle.str(a.ids())},
                       {"m1_cycle", e.m1_cycle ? "yes" : "no"},
                       {"m1_exact", e.m1_exact ? "yes" : "no"}});
            if (!rep.candidate_found) {
                r.kv("certificate", "no certificate: all primary obstructions exact");
                std::ostringstream os;
                r.emit(os);
                write_out(o, os.str(), out);
                return 1;
            }
            r.kv("candidate", rep.candidate.str(a.ids()));
            r.kv("certificate", rep.certificate.detail);
            auto l = symmetrize_algebra(a, std::min(w.kmax, w.lmax + 1));
            auto cycrep = cyclic_ce_vanishing(l, rep.certificate, w, o.samples, o.seed);
            r.kv("cyclic_cocycles_witnessed", std::to_string(cycrep.witnessed) + "/" +
                                                  std::to_string(cycrep.sampled));
            auto lm = lmodule_from_bimodule(diagonal_bimodule(a), w);
            auto modrep = ce_module_vanishing(lm, rep.certificate, w, o.samples, o.seed + 1);
            r.kv("module_cocycles_witnessed", std::to_string(modrep.witnessed) + "/" +
                                                  std::to_string(modrep.sampled));
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return cycrep.ok() && modrep.ok() ? 0 : 1;
        }
        if (pages->parsed()) {
            auto cx = assemble(enumerate_window(SpaceKind::Bar, a, w),
                               [&](const Word& word) {
                                   Window exact = w;
                                   exact.lmax = 1 << 20;
                                   SignedVector v(Flavor::Plain, w.emax);
                                   v.add(word, NovikovScalar::one(w.emax));
                                   return dhat_apply(a, v, exact);
                               });
            Report r(fmt_of(o), w, "pages");
            for (int page = 1; page <= 2; ++page)
                for (const auto& p : spectral_page(cx, page))
                    r.row({{"page", std::to_string(page)},
                           {"degree", std::to_string(p.degree)},
                           {"level", std::to_string(p.level)},
                           {"dim", std::to_string(p.dim)}});
            std::ostringstream os;
            r.emit(os);
            write_out(o, os.str(), out);
            return 0;
        }
        err << "unknown subcommand\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error";
        if (e.line > 0) err << " at line " << e.line << ", column " << e.column;
        err << ": " << e.what() << "\n";
        return 2;
    } catch (const RefusalError& e) {
        err << "refused: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace obstructa
