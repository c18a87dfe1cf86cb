#include "bistoch/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bistoch/csv.hpp"
#include "bistoch/errors.hpp"
#include "bistoch/parallel.hpp"

namespace bistoch {

namespace {

struct RawOptions {
    std::string command;
    std::optional<long long> n, m, max_iter, d, replicas, slope_points;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon, sigma_out, p_out, c_sk, eps_sk;
    std::optional<std::string> eps_grid, density, noise, hetero_shift, init, laplacian, convention, output, fixture,
        matrix_dump, slope_output, eigen_output;
};

void build_app(CLI::App& app, RawOptions& raw) {
    app.add_option("command", raw.command, "generate | sweep | pointwise | embed | skdiag | moments")->required();
    app.set_config("--config", "", "key = value file; flags override its values");
    app.allow_config_extras(false);
    app.add_option("--n", raw.n, "number of samples (3000; embed: 1000)");
    app.add_option("--m", raw.m, "ambient dimension (2000 with noise, native otherwise)");
    app.add_option("--epsilon", raw.epsilon, "kernel bandwidth (5e-4)");
    app.add_option("--eps-grid", raw.eps_grid, "sweep grid start:stop:Klog | start:stop:Klin | list (1e-4:1e-2:10log)");
    app.add_option("--density", raw.density, "sinusoidal | circle");
    app.add_option("--noise", raw.noise, "none | simple | heteroskedastic | iid");
    app.add_option("--sigma-out", raw.sigma_out, "noise scale (0.1)");
    app.add_option("--p-out", raw.p_out, "outlier probability, simple noise (0.1)");
    app.add_option("--hetero-shift", raw.hetero_shift, "heteroskedastic u drawn per: replica | sample (replica)");
    app.add_option("--c-sk", raw.c_sk, "SK lower bound in the affinity's units, 0 = off (0.01; embed: 0)");
    app.add_option("--eps-sk", raw.eps_sk, "SK residual tolerance (1e-3)");
    app.add_option("--max-iter", raw.max_iter, "SK iteration cap (50)");
    app.add_option("--init", raw.init, "SK start: degree | ones (degree)");
    app.add_option("--laplacian", raw.laplacian, "bistoch-un | bistoch-rw | dm-un | dm-rw (bistoch-un)");
    app.add_option("--convention", raw.convention, "normalized | unscaled (normalized)");
    app.add_option("--d", raw.d, "intrinsic dimension (1); moments: 1..3");
    app.add_option("--replicas", raw.replicas, "Monte-Carlo replicas (20)");
    app.add_option("--seed", raw.seed, "base seed; replica r uses seed + r (1)");
    app.add_option("--slope-points", raw.slope_points, "grid points per slope branch (3)");
    app.add_option("--output", raw.output, "output path, - for stdout");
    app.add_option("--fixture", raw.fixture, "skdiag: matrix CSV to scale");
    app.add_option("--matrix-dump", raw.matrix_dump, "write the affinity matrix CSV");
    app.add_option("--slope-output", raw.slope_output, "sweep: slope JSON path");
    app.add_option("--eigen-output", raw.eigen_output, "embed: eigenpairs CSV of replica 0");
}

template <class T, class Parse>
T parse_named(const std::string& key, const std::string& value, Parse parse) {
    try {
        return parse(value);
    } catch (const DomainError& e) {
        throw UsageError(key, e.what());
    }
}

std::size_t positive_count(const std::string& key, long long v, long long min) {
    if (v < min) throw UsageError(key, "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

Command parse_command(const std::string& name) {
    if (name == "generate") return Command::Generate;
    if (name == "sweep") return Command::Sweep;
    if (name == "pointwise") return Command::Pointwise;
    if (name == "embed") return Command::Embed;
    if (name == "skdiag") return Command::SkDiag;
    if (name == "moments") return Command::Moments;
    throw UsageError("", "unknown command '" + name + "'");
}

RunConfig resolve(const RawOptions& raw) {
    RunConfig cfg;
    cfg.command = parse_command(raw.command);
    const bool embed = cfg.command == Command::Embed;

    cfg.n = raw.n ? positive_count("n", *raw.n, 2) : (embed ? 1000 : 3000);
    if (raw.epsilon) {
        if (!(*raw.epsilon > 0.0) || !std::isfinite(*raw.epsilon)) throw UsageError("epsilon", "must be positive");
        cfg.epsilon = *raw.epsilon;
    }
    cfg.epsilons = parse_named<std::vector<double>>("eps-grid", raw.eps_grid.value_or("1e-4:1e-2:10log"), parse_grid);

    if (raw.density) cfg.density = parse_named<DensityKind>("density", *raw.density, parse_density_kind);
    if (embed) {
        if (raw.density && cfg.density != DensityKind::UniformCircle)
            throw UsageError("density", "embed runs on the uniform circle");
        cfg.density = DensityKind::UniformCircle;
    }

    const std::string noise_name = raw.noise.value_or(embed ? "heteroskedastic" : "none");
    if (noise_name != "none") {
        NoiseModel model;
        model.kind = parse_named<NoiseKind>("noise", noise_name, parse_noise_kind);
        model.m = 2000;
        if (raw.sigma_out) {
            if (!(*raw.sigma_out > 0.0)) throw UsageError("sigma-out", "must be positive");
            model.sigma_out = *raw.sigma_out;
        }
        if (raw.p_out) {
            if (!(*raw.p_out >= 0.0 && *raw.p_out < 1.0)) throw UsageError("p-out", "must be in [0, 1)");
            model.p_out = *raw.p_out;
        }
        if (raw.hetero_shift) {
            if (*raw.hetero_shift != "replica" && *raw.hetero_shift != "sample")
                throw UsageError("hetero-shift", "must be replica or sample");
            model.shared_shift = *raw.hetero_shift == "replica";
        }
        cfg.noise = model;
    }
    if (raw.m) {
        const std::size_t floor = cfg.noise ? 4 : native_dim(cfg.density);
        cfg.m = positive_count("m", *raw.m, static_cast<long long>(floor));
        if (cfg.noise) cfg.noise->m = *cfg.m;
    }

    cfg.sk.c_sk = embed ? 0.0 : 0.01;
    if (raw.c_sk) {
        if (!(*raw.c_sk >= 0.0) || !std::isfinite(*raw.c_sk)) throw UsageError("c-sk", "must be non-negative");
        cfg.sk.c_sk = *raw.c_sk;
    }
    if (raw.eps_sk) {
        if (!(*raw.eps_sk > 0.0) || !std::isfinite(*raw.eps_sk)) throw UsageError("eps-sk", "must be positive");
        cfg.sk.eps_sk = *raw.eps_sk;
    }
    if (raw.max_iter) cfg.sk.max_iter = positive_count("max-iter", *raw.max_iter, 1);
    if (raw.init) cfg.sk.init = parse_named<SkInit>("init", *raw.init, parse_sk_init);
    if (raw.laplacian)
        cfg.laplacian = parse_named<LaplacianKind>("laplacian", *raw.laplacian, parse_laplacian_kind);
    if (raw.convention) cfg.convention = parse_named<Convention>("convention", *raw.convention, parse_convention);

    if (raw.d) {
        const auto d = static_cast<int>(positive_count("d", *raw.d, 1));
        if (cfg.command == Command::Moments) {
            if (d > 3) throw UsageError("d", "moments support d = 1, 2, 3");
            cfg.moment_dim = d;
        }
        cfg.intrinsic_dim = d;
    }
    if (raw.replicas) cfg.replicas = positive_count("replicas", *raw.replicas, 1);
    if (raw.seed) cfg.seed = *raw.seed;
    if (raw.slope_points) cfg.slope_points = positive_count("slope-points", *raw.slope_points, 2);
    if (cfg.command == Command::Sweep && cfg.slope_points > cfg.epsilons.size())
        throw UsageError("slope-points", "exceeds the number of grid points");

    if (raw.output) cfg.output = *raw.output;
    cfg.fixture = raw.fixture;
    cfg.matrix_dump = raw.matrix_dump;
    cfg.slope_output = raw.slope_output;
    cfg.eigen_output = raw.eigen_output;
    return cfg;
}

// Output sink: stdout for "-", otherwise a file opened for writing.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
}

std::size_t ambient_dim(const RunConfig& cfg) {
    if (cfg.noise) return cfg.noise->m;
    return cfg.m.value_or(native_dim(cfg.density));
}

Dataset generate_dataset(const RunConfig& cfg) {
    Dataset ds = make_dataset(cfg.n, cfg.density, cfg.noise, cfg.seed);
    if (!cfg.noise && ambient_dim(cfg) != ds.ambient_dim()) ds = embed_dataset(ds, ambient_dim(cfg));
    return ds;
}

void dump_matrix(const std::optional<std::string>& path, const Matrix& m) {
    if (!path) return;
    std::ostringstream os;
    csv::write_matrix(os, m);
    write_file(*path, os.str());
}

PointwiseConfig pointwise_config(const RunConfig& cfg) {
    PointwiseConfig pc;
    pc.n = cfg.n;
    pc.density = cfg.density;
    pc.epsilon = cfg.epsilon;
    pc.sk = cfg.sk;
    pc.kind = cfg.laplacian;
    pc.noise = cfg.noise;
    pc.convention = cfg.convention;
    pc.intrinsic_dim = cfg.intrinsic_dim;
    pc.seed = cfg.seed;
    return pc;
}

void run_generate(const RunConfig& cfg, std::ostream& out) {
    const Dataset ds = generate_dataset(cfg);
    write_dataset_csv(out, ds);
    if (cfg.matrix_dump)
        dump_matrix(cfg.matrix_dump,
                    build_affinity(ds.observed(), cfg.epsilon, cfg.intrinsic_dim, true, cfg.convention).matrix);
}

std::string run_pointwise(const RunConfig& cfg, std::ostream& out) {
    const PointwiseConfig pc = pointwise_config(cfg);
    const Dataset ds = make_dataset(cfg.n, cfg.density, cfg.noise, cfg.seed);
    const Matrix sq = squared_distances(ds.observed(), thread_count());
    const PointwiseResult res = pointwise_on_dataset(ds, sq, pc);
    if (cfg.matrix_dump)
        dump_matrix(cfg.matrix_dump,
                    affinity_from_squared_distances(sq, cfg.epsilon, cfg.intrinsic_dim, true, cfg.convention).matrix);

    const bool bistoch = is_bistochastic(cfg.laplacian);
    const Vector pref = population_reference(ds, cfg.density);
    out << "i,t,estimate,reference,outlier";
    if (bistoch) out << ",eta,p_inv_sqrt";
    out << '\n';
    for (std::size_t i = 0; i < ds.n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const bool flag = ds.outlier_flags && (*ds.outlier_flags)[i];
        out << i << ',' << csv::format(ds.t[i]) << ',' << csv::format(res.estimate(r)) << ','
            << csv::format(res.reference(r)) << ',' << (flag ? 1 : 0);
        if (bistoch) out << ',' << csv::format(res.eta(r)) << ',' << csv::format(pref(r));
        out << '\n';
    }
    std::ostringstream s;
    s << " relerr2=" << res.errors.relerr2 << " relerrinf=" << res.errors.relerrinf;
    if (bistoch) s << " sk_iters=" << res.sk_iters << (res.sk_converged ? "" : " (not converged)");
    return s.str();
}

std::string run_sweep(const RunConfig& cfg, std::ostream& out) {
    SweepConfig sc;
    sc.n = cfg.n;
    sc.density = cfg.density;
    sc.epsilons = cfg.epsilons;
    sc.replicas = cfg.replicas;
    sc.sk = cfg.sk;
    sc.kind = cfg.laplacian;
    sc.noise = cfg.noise;
    sc.convention = cfg.convention;
    sc.intrinsic_dim = cfg.intrinsic_dim;
    sc.base_seed = cfg.seed;
    sc.threads = thread_count();
    const auto records = epsilon_sweep(sc);

    out << "epsilon,relerr2_mean,relerr2_std,relerrinf_mean,relerrinf_std,mean_sk_iters,replicas\n";
    for (const auto& r : records)
        out << csv::format(r.epsilon) << ',' << csv::format(r.relerr2_mean) << ',' << csv::format(r.relerr2_std) << ','
            << csv::format(r.relerrinf_mean) << ',' << csv::format(r.relerrinf_std) << ','
            << csv::format(r.mean_sk_iters) << ',' << r.replicas << '\n';

    if (cfg.slope_output) {
        std::vector<double> le, l2, linf;
        for (const auto& r : records) {
            le.push_back(std::log(r.epsilon));
            l2.push_back(std::log(r.relerr2_mean));
            linf.push_back(std::log(r.relerrinf_mean));
        }
        const std::size_t k = cfg.slope_points;
        const std::size_t total = records.size();
        nlohmann::json report = nlohmann::json::array();
        for (const auto& [branch, first] : {std::pair<std::string, std::size_t>{"small_eps", 0},
                                            std::pair<std::string, std::size_t>{"large_eps", total - k}}) {
            report.push_back({{"branch", branch},
                              {"metric", "relerr2"},
                              {"first", first},
                              {"last", first + k},
                              {"slope", slope_fit(le, l2, first, first + k)}});
            report.push_back({{"branch", branch},
                              {"metric", "relerrinf"},
                              {"first", first},
                              {"last", first + k},
                              {"slope", slope_fit(le, linf, first, first + k)}});
        }
        write_file(*cfg.slope_output, report.dump(2) + "\n");
    }
    std::ostringstream s;
    s << " grid=" << records.size() << " replicas=" << cfg.replicas;
    return s.str();
}

void write_eigenpairs_csv(std::ostream& out, const EigenPairs& pairs) {
    out << "mode,eigenvalue";
    for (Eigen::Index i = 0; i < pairs.vectors.rows(); ++i) out << ",v" << (i + 1);
    out << '\n';
    for (Eigen::Index c = 0; c < pairs.values.size(); ++c) {
        out << c << ',' << csv::format(pairs.values(c));
        for (Eigen::Index i = 0; i < pairs.vectors.rows(); ++i) out << ',' << csv::format(pairs.vectors(i, c));
        out << '\n';
    }
}

std::string run_embed(const RunConfig& cfg, std::ostream& out) {
    EmbeddingConfig ec;
    ec.n = cfg.n;
    ec.noise = cfg.noise;
    ec.epsilon = cfg.epsilon;
    ec.sk = cfg.sk;
    ec.replicas = cfg.replicas;
    ec.base_seed = cfg.seed;
    ec.threads = thread_count();
    const EmbeddingResult res = embedding_experiment(ec);

    out << "method,pair,mse_mean,mse_std,replicas\n";
    for (const auto& row : res.summary)
        out << to_string(row.method) << ',' << row.pair << ',' << csv::format(row.mse_mean) << ','
            << csv::format(row.mse_std) << ',' << row.replicas << '\n';

    if (cfg.eigen_output) {
        EigenPairs pairs;
        embedding_replica(ec, cfg.seed, &pairs);
        std::ostringstream os;
        write_eigenpairs_csv(os, pairs);
        write_file(*cfg.eigen_output, os.str());
    }
    std::ostringstream s;
    s << " replicas=" << cfg.replicas;
    return s.str();
}

std::string run_skdiag(const RunConfig& cfg, std::ostream& out) {
    Matrix a;
    if (cfg.fixture) {
        std::ifstream in(*cfg.fixture);
        if (!in) throw UsageError("fixture", "cannot open '" + *cfg.fixture + "'");
        a = csv::read_matrix(in);
        if (a.rows() != a.cols()) throw UsageError("fixture", "matrix must be square");
        if (!a.isApprox(a.transpose(), 0.0)) throw UsageError("fixture", "matrix must be symmetric");
        if ((a.array() < 0.0).any()) throw UsageError("fixture", "matrix must be non-negative");
    } else {
        const Dataset ds = make_dataset(cfg.n, cfg.density, cfg.noise, cfg.seed);
        a = build_affinity(ds.observed(), cfg.epsilon, cfg.intrinsic_dim, true, cfg.convention, thread_count()).matrix;
    }
    dump_matrix(cfg.matrix_dump, a);
    const ScalingResult res = approx_sym_sk(a, cfg.sk);
    out << "iter,residual_inf\n";
    for (std::size_t j = 0; j < res.residual_history.size(); ++j)
        out << (j + 1) << ',' << csv::format(res.residual_history[j]) << '\n';
    std::ostringstream s;
    s << " iterations=" << res.iterations << " converged=" << (res.converged ? "yes" : "no")
      << " projection_hits=" << res.projection_hits;
    return s.str();
}

std::string run_moments(const RunConfig& cfg, std::ostream& out) {
    out << "d,m0,m2\n";
    std::ostringstream s;
    for (int d = 1; d <= 3; ++d) {
        if (cfg.moment_dim && *cfg.moment_dim != d) continue;
        const KernelMoments km = kernel_moments(d);
        out << d << ',' << csv::format(km.m0) << ',' << csv::format(km.m2) << '\n';
        s << " d=" << d << ":m0=" << km.m0 << ",m2=" << km.m2;
    }
    return s.str();
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Generate: return "generate";
        case Command::Sweep: return "sweep";
        case Command::Pointwise: return "pointwise";
        case Command::Embed: return "embed";
        case Command::SkDiag: return "skdiag";
        case Command::Moments: return "moments";
    }
    return "?";
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto parts = csv::split(text, ':');
    if (parts.size() == 3) {
        const double start = csv::parse_double(parts[0]);
        const double stop = csv::parse_double(parts[1]);
        const std::string& tail = parts[2];
        const bool log = tail.size() > 3 && tail.ends_with("log");
        const bool lin = tail.size() > 3 && tail.ends_with("lin");
        if (!log && !lin) throw DomainError("grid count must end in log or lin: '" + tail + "'");
        const double count_d = csv::parse_double(tail.substr(0, tail.size() - 3));
        if (count_d < 1 || count_d != std::floor(count_d)) throw DomainError("grid count must be a positive integer");
        const auto count = static_cast<std::size_t>(count_d);
        if (!(start > 0.0) || !(stop >= start)) throw DomainError("grid needs 0 < start <= stop");
        for (std::size_t k = 0; k < count; ++k) {
            const double frac = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
            out.push_back(log ? std::exp(std::log(start) + frac * (std::log(stop) - std::log(start)))
                              : start + frac * (stop - start));
        }
        out.front() = start;
        if (count > 1) out.back() = stop;
    } else if (parts.size() == 1) {
        for (const auto& f : csv::split(text, ',')) out.push_back(csv::parse_double(f));
    } else {
        throw DomainError("malformed grid '" + text + "'");
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!(out[k] > 0.0)) throw DomainError("grid values must be positive");
        if (k > 0 && out[k] < out[k - 1]) throw DomainError("grid values must be ascending");
    }
    return out;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"bistoch"};
    RawOptions raw;
    build_app(app, raw);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError("", e.what());
    }
    return resolve(raw);
}

std::string usage_text() {
    CLI::App app{"bistoch: bistochastic graph Laplacian experiments"};
    RawOptions raw;
    build_app(app, raw);
    return app.help();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    Sink sink(cfg.output, out);
    std::string detail;
    switch (cfg.command) {
        case Command::Generate: run_generate(cfg, sink.get()); break;
        case Command::Pointwise: detail = run_pointwise(cfg, sink.get()); break;
        case Command::Sweep: detail = run_sweep(cfg, sink.get()); break;
        case Command::Embed: detail = run_embed(cfg, sink.get()); break;
        case Command::SkDiag: detail = run_skdiag(cfg, sink.get()); break;
        case Command::Moments: detail = run_moments(cfg, sink.get()); break;
    }
    sink.get().flush();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << "bistoch " << to_string(cfg.command) << ": n=" << cfg.n << " epsilon=" << cfg.epsilon << detail
        << " wall=" << wall << "s\n";
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) {
        out << usage_text();
        return 0;
    }
    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n\n" << usage_text();
        return 1;
    }
    try {
        return run(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const DegenerateInputError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bistoch
