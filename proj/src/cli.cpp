#include "odeflow/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "odeflow/certificate.hpp"
#include "odeflow/dynamics.hpp"
#include "odeflow/embedding.hpp"
#include "odeflow/model_io.hpp"
#include "odeflow/verify.hpp"

namespace odeflow {

using nlohmann::json;

namespace {

std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("params: expected K=V, got \"" + item + "\"");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

GateSpec gate_spec_from_config(const RunConfig& config) {
    const auto id = gate_from_name(config.gate);
    if (!id || *id == GateId::custom)
        throw std::invalid_argument("unknown gate \"" + config.gate + "\"");
    const auto params = parse_params(config.params);
    auto get = [&](const std::string& key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    switch (*id) {
        case GateId::rotor: return GateSpec::rotor(get("alpha", 1.0));
        case GateId::pump: return GateSpec::pump(get("alpha", 1.0));
        case GateId::amplifier: return GateSpec::amplifier(get("alpha", 1.0));
        case GateId::rigid_body:
            return GateSpec::rigid_body(get("I1", 1.0), get("I2", 1.0), get("I3", 1.0));
        default: break;
    }
    throw std::invalid_argument("unknown gate \"" + config.gate + "\"");
}

Model resolve_model(const RunConfig& config) {
    if (!config.model_path.empty()) return load_model(config.model_path);
    if (!config.gate.empty()) {
        const GateSpec spec = gate_spec_from_config(config);
        return Model{build(spec), spec, std::nullopt};
    }
    throw std::invalid_argument("no model: pass --model PATH or --gate NAME");
}

void write_output(const RunConfig& config, const std::string& text) {
    if (config.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.out_path);
    if (!out) throw std::invalid_argument("cannot write output file " + config.out_path);
    out << text;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json certificate_to_json(const CertificateResult& cert) {
    json j;
    j["status"] = cert.found() ? "found" : "not_found";
    if (cert.found()) {
        j["G"] = matrix_to_json(cert.G.gram);
        j["L"] = matrix_to_json(cert.cholesky);
        j["basis_change"] = matrix_to_json(cert.basis_change);
    }
    if (cert.witness) {
        j["witness"] = vector_to_json(*cert.witness);
        j["witness_lambda"] = cert.witness_lambda;
    }
    return j;
}

json report_to_json(const ResidualReport& rep) {
    json j;
    j["check"] = rep.check;
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    j["max_residual"] = rep.max_residual;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    json parts = json::array();
    for (const auto& p : rep.parts) {
        parts.push_back(json{{"name", p.name},
                             {"residual", p.residual},
                             {"tolerance", p.tolerance},
                             {"pass", p.pass}});
    }
    j["parts"] = parts;
    return j;
}

Eigen::VectorXd parse_state(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        vals.push_back(std::stod(item));
    }
    Eigen::VectorXd y(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) y[static_cast<int>(i)] = vals[i];
    return y;
}

CertificateOptions certificate_options(const RunConfig& config) {
    CertificateOptions opts;
    opts.seed = config.seed;
    opts.residual_tol = config.tol;
    return opts;
}

}  // namespace

int cmd_certify(const RunConfig& config) {
    const Model model = resolve_model(config);
    const CertificateResult cert = find_certificate(model.B, certificate_options(config));
    write_output(config, certificate_to_json(cert).dump(2) + "\n");
    return cert.found() ? 0 : 1;
}

int cmd_embed(const RunConfig& config) {
    const Model model = resolve_model(config);
    const CertificateResult cert = find_certificate(model.B, certificate_options(config));
    if (!cert.found()) {
        write_output(config, certificate_to_json(cert).dump(2) + "\n");
        return 1;
    }
    const SymBilinearMap Beu = euclideanize(model.B, cert);
    const SMap S = SMap::build(Beu);

    Rng rng(derive_seed(config.seed, 11));
    std::vector<ChartPoint> samples;
    const int n_samples = std::max(4, config.samples / 8);
    for (int i = 0; i < n_samples; ++i)
        samples.push_back(sample_chart_point(rng, S.n(), 3, 0.7));
    const double C = choose_C(S, samples);

    json j;
    j["n"] = S.n();
    j["C"] = C;
    j["certificate"] = certificate_to_json(cert);
    json gens = json::array();
    for (int k = 0; k < S.n(); ++k) gens.push_back(matrix_to_json(S.generator(k)));
    j["S"] = gens;
    json bases = json::array();
    const int n_bases = std::min<std::size_t>(4, samples.size());
    for (int i = 0; i < n_bases; ++i)
        bases.push_back(matrix_to_json(samples[i].chart.base.matrix()));
    j["chart_base_points"] = bases;
    write_output(config, j.dump(2) + "\n");
    return 0;
}

int cmd_verify(const RunConfig& config) {
    const Model model = resolve_model(config);
    const CertificateResult cert = find_certificate(model.B, certificate_options(config));
    if (!cert.found()) {
        std::ostringstream out;
        out << json{{"check", "certificate"}, {"pass", false}, {"status", "not_found"}}.dump()
            << "\n";
        write_output(config, out.str());
        return 1;
    }
    const SymBilinearMap Beu = euclideanize(model.B, cert);
    SMap S = SMap::build(Beu);
    if (config.inject_skew_defect) {
        auto gens = S.generators();
        gens[0](0, 1) += 0.1;  // break skewness of one generator
        S = SMap::from_dense(gens, /*require_skew=*/false);
    }

    VerifySuiteOptions opts;
    opts.seed = config.seed;
    opts.samples_pointwise = config.samples;
    opts.samples_covelocity = 2 * config.samples;
    const auto reports = run_verification_suite(Beu, S, opts);

    std::ostringstream out;
    bool all_pass = true;
    for (const auto& rep : reports) {
        out << report_to_json(rep).dump() << "\n";
        all_pass = all_pass && rep.pass;
    }
    write_output(config, out.str());
    return all_pass ? 0 : 1;
}

int cmd_simulate(const RunConfig& config) {
    const Model model = resolve_model(config);
    Eigen::VectorXd y0;
    if (!config.y0.empty()) {
        y0 = parse_state(config.y0);
    } else if (model.y0) {
        y0 = *model.y0;
    } else {
        throw std::invalid_argument("simulate: no initial state (--y0 or model \"y0\")");
    }
    if (y0.size() != model.B.n())
        throw std::invalid_argument("simulate: initial state has wrong dimension");

    Trajectory traj;
    if (config.integrator == "rk4") {
        traj = integrate_rk4(model.B, y0, config.t0, config.t1, config.step);
    } else if (config.integrator == "midpoint") {
        // Energy column uses the certified inner product when one is found.
        const CertificateResult cert = find_certificate(model.B, certificate_options(config));
        const InnerProduct G =
            cert.found() ? cert.G : InnerProduct::identity(model.B.n());
        traj = integrate_midpoint(model.B, G, y0, config.t0, config.t1, config.step,
                                  config.fp_tol);
    } else {
        throw std::invalid_argument("simulate: unknown integrator \"" + config.integrator +
                                    "\" (rk4 | midpoint)");
    }

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_output(config, csv.str());

    if (config.particles && traj.ok()) {
        // The particle flow lives on the embedding of the euclideanized
        // system; trajectories map to that frame by y' = L^T y.
        const CertificateResult cert = find_certificate(model.B, certificate_options(config));
        if (!cert.found())
            throw std::runtime_error("simulate: --particles needs a certifiable model");
        const SymBilinearMap Beu = euclideanize(model.B, cert);
        const SMap S = SMap::build(Beu);
        Trajectory prim = traj;
        for (auto& y : prim.states) y = cert.basis_change * y;
        const auto flow = particle_flow(S, prim, OrthMat::identity(S.n()), config.step);
        std::vector<double> times(flow.size());
        const double h = (prim.times.back() - prim.times.front()) /
                         static_cast<double>(flow.size() - 1);
        for (std::size_t k = 0; k < flow.size(); ++k) times[k] = prim.times.front() + h * k;
        std::ostringstream pcsv;
        write_particle_csv(pcsv, times, flow);
        const std::string ppath =
            config.out_path.empty() ? "" : config.out_path + ".particles.csv";
        if (ppath.empty()) {
            std::cout << pcsv.str();
        } else {
            std::ofstream out(ppath);
            if (!out) throw std::invalid_argument("cannot write output file " + ppath);
            out << pcsv.str();
        }
    }
    return traj.ok() ? 0 : 1;
}

int cmd_gates(const RunConfig& config) {
    if (config.gate.empty()) {
        std::ostringstream out;
        out << "rotor      n=3  params: alpha (default 1)\n"
            << "pump       n=2  params: alpha (default 1)\n"
            << "amplifier  n=2  params: alpha (default 1)\n"
            << "rigid_body n=3  params: I1,I2,I3 (default 1, must be > 0)\n";
        write_output(config, out.str());
        return 0;
    }
    const GateSpec spec = gate_spec_from_config(config);
    const Model model{build(spec), spec, std::nullopt};
    write_output(config, model_to_json(model));
    return 0;
}

int run_cli(const RunConfig& config) {
    try {
        if (!(config.tol > 0.0) || !(config.fp_tol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
        if (config.samples < 1) throw std::invalid_argument("sample counts must be >= 1");
        if (config.command == "certify") return cmd_certify(config);
        if (config.command == "embed") return cmd_embed(config);
        if (config.command == "verify") return cmd_verify(config);
        if (config.command == "simulate") return cmd_simulate(config);
        if (config.command == "gates") return cmd_gates(config);
        std::cerr << "unknown command \"" << config.command << "\"\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace odeflow
