// Command-line front end: catalog listing, schedule rendering, the two
// simulation experiments, curve analysis, filter/coherence evaluation and
// the closed-form theory bounds.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dd/harness.hpp"
#include "dd/metrics.hpp"
#include "json.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
}

std::vector<double> pulse_times_of(const dd::Schedule& sch) {
    std::vector<double> ts;
    for (const auto& e : sch.events)
        if (e.pulse.kind == dd::PulseKind::physical) ts.push_back(e.t_start + e.duration);
    return ts;
}

std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dd;
    CLI::App app{"dynamical-decoupling survey toolkit"};
    app.require_subcommand(1);

    // ---- list ----
    auto* sub_list = app.add_subcommand("list", "print the sequence catalog");

    // ---- schedule ----
    auto* sub_sched = app.add_subcommand("schedule", "render a pulse schedule and export JSON");
    std::string sq_seq = "xy4", sq_out;
    int sq_n = 0, sq_m = 0, sq_reps = 1;
    double sq_T = 1.0, sq_delta = 0.0, sq_d = 0.0;
    char sq_sym = 'a';
    sub_sched->add_option("--seq", sq_seq, "sequence name");
    sub_sched->add_option("--n", sq_n, "family order");
    sub_sched->add_option("--m", sq_m, "inner order");
    sub_sched->add_option("--T", sq_T, "total time, s");
    sub_sched->add_option("--delta", sq_delta, "pulse width, s");
    sub_sched->add_option("--d", sq_d, "extra per-interval delay, s");
    sub_sched->add_option("--sym", sq_sym, "padding convention: a or s");
    sub_sched->add_option("--reps", sq_reps, "block repetitions");
    sub_sched->add_option("--out", sq_out, "output file (default stdout)");

    // ---- simulate ----
    auto* sub_sim = app.add_subcommand("simulate", "run an experiment, emit the curve CSV");
    std::string sim_exp = "pauli", sim_model, sim_out, sim_states, sim_zmode, sim_sym;
    std::vector<std::string> sim_seqs;
    double sim_T = 0, sim_delta = 0, sim_d = -1;
    long sim_shots = 0;
    uint64_t sim_seed = 0;
    int sim_cals = 0;
    sub_sim->add_option("--experiment", sim_exp, "pauli or interval");
    sub_sim->add_option("--model", sim_model, "experiment config JSON file");
    sub_sim->add_option("--seq", sim_seqs, "sequence name(s), overrides config");
    sub_sim->add_option("--states", sim_states, "pauli6 or haar:K");
    sub_sim->add_option("--T", sim_T, "total time / grid end, s");
    sub_sim->add_option("--delta", sim_delta, "pulse width, s");
    sub_sim->add_option("--d", sim_d, "extra per-interval delay, s");
    sub_sim->add_option("--sym", sim_sym, "padding conventions, chars of {a,s}");
    sub_sim->add_option("--shots", sim_shots, "shots per point");
    sub_sim->add_option("--seed", sim_seed, "master seed");
    sub_sim->add_option("--calibrations", sim_cals, "model redraws");
    sub_sim->add_option("--z-mode", sim_zmode, "virtual or physical");
    sub_sim->add_option("--out", sim_out, "output CSV file (default stdout)");

    // ---- analyze ----
    auto* sub_an = app.add_subcommand("analyze", "statistics over a curve CSV");
    sub_an->require_subcommand(1);
    std::string an_in, an_out, an_fmt = "csv";
    double an_T = 0;
    auto* an_ita = sub_an->add_subcommand("ita", "time-averaged fidelity per curve");
    auto* an_box = sub_an->add_subcommand("boxstats", "quartiles per (sequence, abscissa)");
    auto* an_fit = sub_an->add_subcommand("fit", "oscillatory decay fit per curve");
    for (auto* s : {an_ita, an_box, an_fit}) {
        s->add_option("--in", an_in, "input curve CSV")->required();
        s->add_option("--out", an_out, "output file (default stdout)");
        s->add_option("--format", an_fmt, "json or csv");
    }
    an_ita->add_option("--T", an_T, "averaging window (default: last time)");

    // ---- filter ----
    auto* sub_fil = app.add_subcommand("filter", "filter function scan or coherence integral");
    std::string fl_seq = "cpmg", fl_out, fl_spec = "ohmic";
    int fl_n = 0, fl_m = 0, fl_reps = 1, fl_points = 1000;
    double fl_T = 1.0, fl_wmax = 50.0, fl_amp = 1.0, fl_cut = 10.0, fl_exp = 1.0;
    double fl_wmin = 0.0, fl_wcap = 0.0, fl_t = 0.0;
    bool fl_chi = false;
    sub_fil->add_option("--seq", fl_seq, "sequence name");
    sub_fil->add_option("--n", fl_n, "family order");
    sub_fil->add_option("--m", fl_m, "inner order");
    sub_fil->add_option("--T", fl_T, "total time");
    sub_fil->add_option("--reps", fl_reps, "block repetitions");
    sub_fil->add_option("--points", fl_points, "omega grid size");
    sub_fil->add_option("--omega-max", fl_wmax, "omega grid end");
    sub_fil->add_flag("--chi", fl_chi, "compute the coherence integral instead");
    sub_fil->add_option("--spectrum", fl_spec, "ohmic, lorentzian, one_over_f");
    sub_fil->add_option("--amplitude", fl_amp, "spectral amplitude");
    sub_fil->add_option("--cutoff", fl_cut, "angular cutoff");
    sub_fil->add_option("--exponent", fl_exp, "spectral exponent");
    sub_fil->add_option("--wmin", fl_wmin, "evaluation domain start");
    sub_fil->add_option("--wmax-domain", fl_wcap, "evaluation domain end (0 = unbounded)");
    sub_fil->add_option("--t", fl_t, "coherence time argument (default T)");
    sub_fil->add_option("--out", fl_out, "output file (default stdout)");

    // ---- theory ----
    auto* sub_th = app.add_subcommand("theory", "closed-form error bounds and optimal level");
    std::string th_kind = "xy4", th_out;
    double th_J = 0.1, th_eps = 0.2, th_tau = 0.01, th_Delta = 0, th_c = 1.0, th_x = -1;
    int th_level = 1;
    sub_th->add_option("--kind", th_kind, "xy4, xy4_width, edd, cdd, cdd_floor");
    sub_th->add_option("--J", th_J, "bath coupling norm");
    sub_th->add_option("--eps", th_eps, "total Hamiltonian norm");
    sub_th->add_option("--tau", th_tau, "pulse interval");
    sub_th->add_option("--Delta", th_Delta, "pulse width");
    sub_th->add_option("--c", th_c, "concatenation constant");
    sub_th->add_option("--level", th_level, "concatenation level");
    sub_th->add_option("--nopt", th_x, "print the optimal level for this c*eps*tau");
    sub_th->add_option("--out", th_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sub_list) {
            std::string out;
            char buf[96];
            for (const auto& name : catalog()) {
                SequenceIR ir = build(name);
                std::snprintf(buf, sizeof buf, "%-10s %4zu pulses%s%s\n", name.c_str(),
                              ir.pulses.size(), ir.universal ? "  universal" : "",
                              ir.timed() ? "  timed" : "");
                out += buf;
            }
            std::cout << out;
            return 0;
        }

        if (*sub_sched) {
            SequenceIR ir = build(sq_seq, sq_n, sq_m);
            Schedule sch  = ir.timed() ? render_udd_family(ir, sq_T, sq_delta)
                                       : render(ir, sq_T, sq_delta, sq_d, sq_sym, sq_reps);
            auto problems = validate(sch);
            for (const auto& p : problems) std::cerr << "warning: " << p << "\n";
            write_out(sq_out, schedule_to_json(sch));
            return 0;
        }

        if (*sub_sim) {
            ExperimentConfig cfg;
            if (!sim_model.empty()) cfg = config_from_json(read_file(sim_model));
            if (!sim_seqs.empty()) cfg.sequences = sim_seqs;
            if (!sim_states.empty()) cfg.states = sim_states;
            if (sim_T > 0) {
                cfg.t_max = sim_T;
                cfg.T     = sim_T;
                cfg.times.clear();
            }
            if (sim_delta > 0) cfg.delta = sim_delta;
            if (sim_d >= 0) cfg.d = sim_d;
            if (!sim_sym.empty()) cfg.zetas = sim_sym;
            if (sim_shots > 0) cfg.shots = sim_shots;
            if (sub_sim->count("--seed")) cfg.seed = sim_seed;
            if (sim_cals > 0) cfg.calibrations = sim_cals;
            if (!sim_zmode.empty()) {
                if (sim_zmode != "virtual" && sim_zmode != "physical")
                    throw std::invalid_argument("z-mode: expected 'virtual' or 'physical'");
                cfg.z_virtual = sim_zmode == "virtual";
            }
            std::vector<DecayCurve> curves;
            std::vector<SkipRecord> skipped;
            if (sim_exp == "pauli") {
                auto res = run_pauli_experiment(cfg);
                curves   = std::move(res.curves);
                skipped  = std::move(res.skipped);
            } else if (sim_exp == "interval") {
                auto res = run_haar_interval_experiment(cfg);
                curves   = std::move(res.curves);
                skipped  = std::move(res.skipped);
            } else {
                throw std::invalid_argument("experiment: expected 'pauli' or 'interval'");
            }
            for (const auto& s : skipped)
                std::fprintf(stderr, "skipped %s cal=%d t=%.6g d=%.6g %c: %s\n",
                             s.sequence.c_str(), s.calibration, s.time_s, s.d, s.zeta,
                             s.reason.c_str());
            write_out(sim_out, curves_to_csv(curves));
            return 0;
        }

        if (*sub_an) {
            if (an_fmt != "json" && an_fmt != "csv")
                throw std::invalid_argument("format: expected 'json' or 'csv'");
            auto curves = curves_from_csv(read_file(an_in));
            nlohmann::json jrows = nlohmann::json::array();
            std::string csv;
            if (*an_ita) {
                csv = "sequence,state,calibration,T,ita\n";
                for (const auto& c : curves) {
                    double T   = an_T > 0 ? an_T : c.times.back();
                    double ita = time_averaged_fidelity(c.times, c.fidelities(), T);
                    csv += c.sequence_label + "," + c.state_label + "," +
                           std::to_string(c.calibration_id) + "," + csv_num(T) + "," +
                           csv_num(ita) + "\n";
                    jrows.push_back({{"sequence", c.sequence_label},
                                     {"state", c.state_label},
                                     {"calibration", c.calibration_id},
                                     {"T", T},
                                     {"ita", ita}});
                }
            } else if (*an_box) {
                // pool fidelities over states and calibrations per (sequence, x)
                std::map<std::pair<std::string, double>, std::vector<double>> groups;
                for (const auto& c : curves)
                    for (size_t i = 0; i < c.times.size(); ++i)
                        groups[{c.sequence_label, c.times[i]}].push_back(double(c.zeros[i]) /
                                                                         double(c.shots[i]));
                csv = "sequence,x,min,q25,median,q75,max,mean,n\n";
                for (const auto& [key, vals] : groups) {
                    QuartileSummary q = quartile_summary(vals);
                    csv += key.first + "," + csv_num(key.second) + "," + csv_num(q.min) + "," +
                           csv_num(q.q25) + "," + csv_num(q.median) + "," + csv_num(q.q75) + "," +
                           csv_num(q.max) + "," + csv_num(q.mean) + "," +
                           std::to_string(vals.size()) + "\n";
                    jrows.push_back({{"sequence", key.first},
                                     {"x", key.second},
                                     {"min", q.min},
                                     {"q25", q.q25},
                                     {"median", q.median},
                                     {"q75", q.q75},
                                     {"max", q.max},
                                     {"mean", q.mean},
                                     {"n", vals.size()}});
                }
            } else if (*an_fit) {
                csv = "sequence,state,calibration,accepted,lambda,gamma,alpha,hw_lambda,hw_gamma,"
                      "hw_alpha,aicc,note\n";
                for (const auto& c : curves) {
                    std::string note;
                    FitResult r;
                    bool ok = false;
                    if (c.times.size() < 5) {
                        note = "too few points";
                    } else {
                        FitInput in;
                        in.t = c.times;
                        in.y = c.fidelities();
                        for (size_t i = 0; i < in.y.size(); ++i) {
                            double p = in.y[i];
                            in.sigma.push_back(std::max(
                                std::sqrt(std::max(p * (1 - p), 0.0) / double(c.shots[i])), 1e-4));
                        }
                        double dt  = in.t[1] - in.t[0];
                        auto fits  = fit_decay(in, default_fit_seeds(in.t.back(), PI / dt));
                        auto best  = postselect_and_fold(fits, dt);
                        if (best) {
                            r  = *best;
                            ok = true;
                        } else {
                            note = "no admissible fit";
                        }
                    }
                    csv += c.sequence_label + "," + c.state_label + "," +
                           std::to_string(c.calibration_id) + "," + (ok ? "1" : "0") + "," +
                           csv_num(r.lambda) + "," + csv_num(r.gamma) + "," + csv_num(r.alpha) +
                           "," + csv_num(r.half_width[0]) + "," + csv_num(r.half_width[1]) + "," +
                           csv_num(r.half_width[2]) + "," + csv_num(r.aicc) + "," + note + "\n";
                    jrows.push_back({{"sequence", c.sequence_label},
                                     {"state", c.state_label},
                                     {"calibration", c.calibration_id},
                                     {"accepted", ok},
                                     {"lambda", r.lambda},
                                     {"gamma", r.gamma},
                                     {"alpha", r.alpha},
                                     {"hw_lambda", r.half_width[0]},
                                     {"hw_gamma", r.half_width[1]},
                                     {"hw_alpha", r.half_width[2]},
                                     {"aicc", r.aicc},
                                     {"note", note}});
                }
            }
            write_out(an_out, an_fmt == "json" ? jrows.dump(2) + "\n" : csv);
            return 0;
        }

        if (*sub_fil) {
            SequenceIR ir = build(fl_seq, fl_n, fl_m);
            Schedule sch  = ir.timed() ? render_udd_family(ir, fl_T, 0.0)
                                       : render(ir, fl_T, 0.0, 0.0, 'a', fl_reps);
            std::vector<double> times = pulse_times_of(sch);
            if (fl_chi) {
                SpectralDensity S;
                if (fl_spec == "ohmic")
                    S.kind = SpectralDensity::Kind::ohmic;
                else if (fl_spec == "lorentzian")
                    S.kind = SpectralDensity::Kind::lorentzian;
                else if (fl_spec == "one_over_f")
                    S.kind = SpectralDensity::Kind::one_over_f;
                else
                    throw std::invalid_argument("spectrum: unknown kind '" + fl_spec + "'");
                S.amplitude = fl_amp;
                S.cutoff    = fl_cut;
                S.exponent  = fl_exp;
                S.w_min     = fl_wmin;
                S.w_max     = fl_wcap;
                double t   = fl_t > 0 ? fl_t : fl_T;
                double chi = coherence_chi(S, times, t);
                write_out(fl_out, "chi " + csv_num(chi) + "\n");
            } else {
                std::string out = "omega,F\n";
                for (int i = 0; i < fl_points; ++i) {
                    double w = fl_wmax * double(i + 1) / double(fl_points);
                    out += csv_num(w) + "," + csv_num(filter_function(times, fl_T, w)) + "\n";
                }
                write_out(fl_out, out);
            }
            return 0;
        }

        if (*sub_th) {
            std::string out;
            if (th_x >= 0) {
                OptimalLevel lv = cdd_optimal_level(th_x);
                out += "n_opt " + std::to_string(lv.level) +
                       (lv.out_of_range ? " (outside the suppression regime)\n" : "\n");
            } else {
                double eta = theory_eta(th_kind, th_J, th_eps, th_tau, th_Delta, th_c, th_level);
                out += "eta " + csv_num(eta) + "\n";
            }
            write_out(th_out, out);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
