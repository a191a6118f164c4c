// Command-line front door: sample fields from any construction, estimate
// point covariances, run the verification suite, and export or transform
// field files for external tools.  Every subcommand is deterministic given
// its flags plus the seed: re-running a command reproduces its artifacts
// byte for byte.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgflab/analysis/estimate.hpp"
#include "fgflab/analysis/verify.hpp"
#include "fgflab/core/field_io.hpp"
#include "fgflab/samplers/config.hpp"
#include "fgflab/samplers/eigen_series.hpp"

namespace {

/// Flat JSON config files: one object whose keys are the long flag names.
/// Values may be numbers, strings, booleans, or arrays of those.  Explicit
/// command-line flags take precedence over config entries.
class JsonFlatConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
        nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw CLI::FileError("config file must be a flat JSON object of flag values");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar_text(v));
            } else {
                item.inputs.push_back(scalar_text(value));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

  private:
    static std::string scalar_text(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_structured()) throw CLI::FileError("config values must be scalars or arrays of scalars");
        return v.dump();
    }
};

/// Shared construction flags; a subset applies to each construction and the
/// rest are ignored (matching the sampler dispatch).
struct ConstructionFlags {
    std::string construction = "spectral";
    int d = 1;
    int n = 256;
    double box = 1.0;
    std::uint64_t seed = 2026;
    std::uint64_t stream = 0;
    std::optional<double> s;  // spectral / eigen exponent; default d/2
    double eps = 0.05;
    double t = 1.0;
    double range = 0.25;  // volatility truncation T
    std::string levels = "0:6";
    double alpha = 1.0;
    bool centered = false;
    int slabs = 8;
    double bump_radius = 0.5;
    int modes = 16;  // eigen modes per axis
};

void add_construction_flags(CLI::App* sub, ConstructionFlags& f) {
    sub->add_option("--construction", f.construction,
                    "spectral | white-noise | cascade | cone | conv | kahane | volatility | eigen")
        ->capture_default_str();
    sub->add_option("--d", f.d, "dimension")->capture_default_str();
    sub->add_option("--n", f.n, "lattice points per axis (power of two)")->capture_default_str();
    sub->add_option("--box", f.box, "box side length")->capture_default_str();
    sub->add_option("--seed", f.seed, "RNG seed (env FGFLAB_SEED overrides this default)")
        ->envname("FGFLAB_SEED")
        ->capture_default_str();
    sub->add_option("--stream", f.stream, "independent sample index for a fixed seed")->capture_default_str();
    sub->add_option("--s", f.s, "spectral exponent; defaults to the log-correlated point d/2");
    sub->add_option("--eps", f.eps, "inner cutoff for cone / conv")->capture_default_str();
    sub->add_option("--t", f.t, "scale depth for kahane")->capture_default_str();
    sub->add_option("--T", f.range, "truncation range for volatility")->capture_default_str();
    sub->add_option("--levels", f.levels, "cascade level range min:max")->capture_default_str();
    sub->add_option("--alpha", f.alpha, "cascade per-level weight")->capture_default_str();
    sub->add_flag("--centered", f.centered, "cascade cubes centered at the origin instead of cornered");
    sub->add_option("--slabs", f.slabs, "slabs per e-fold for cone / kahane")->capture_default_str();
    sub->add_option("--bump-radius", f.bump_radius, "kahane kernel radius")->capture_default_str();
    sub->add_option("--modes", f.modes, "eigen retained modes per axis")->capture_default_str();
    sub->set_config("--config", "", "flat JSON file with the same keys as the flags; explicit flags win");
    sub->config_formatter(std::make_shared<JsonFlatConfig>());
}

std::pair<int, int> parse_levels(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--levels", "expected min:max, got " + text);
    try {
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--levels", "expected min:max integers, got " + text);
    }
}

fgf::Point parse_point(const std::string& text, int d, const char* flag) {
    fgf::Point p{0, 0, 0, 0};
    std::size_t pos = 0;
    for (int a = 0; a < d; ++a) {
        if (pos >= text.size()) throw CLI::ValidationError(flag, "expected " + std::to_string(d) + " coordinates");
        std::size_t used = 0;
        try {
            p[a] = std::stod(text.substr(pos), &used);
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "bad coordinate in " + text);
        }
        pos += used;
        if (a + 1 < d) {
            if (pos >= text.size() || text[pos] != ',')
                throw CLI::ValidationError(flag, "expected " + std::to_string(d) + " comma-separated coordinates");
            ++pos;
        }
    }
    if (pos != text.size()) throw CLI::ValidationError(flag, "trailing characters in " + text);
    return p;
}

fgf::SamplerChoice to_choice(const ConstructionFlags& f) {
    fgf::SamplerChoice c;
    c.construction = f.construction;
    c.grid = fgf::LatticeGrid(f.d, f.n, f.box);
    c.seed = f.seed;
    c.exponent = f.s;
    c.epsilon = f.eps;
    c.t = f.t;
    c.corr_range = f.range;
    const auto [lo, hi] = parse_levels(f.levels);
    c.level_min = lo;
    c.level_max = hi;
    c.alpha = f.alpha;
    c.origin = f.centered ? fgf::CubeOrigin::centered : fgf::CubeOrigin::corner;
    c.slabs_per_efold = f.slabs;
    c.bump_radius = f.bump_radius;
    return c;
}

/// Eigen fields live on the closed unit box with both boundaries included
/// (site a at position a/(N-1) per axis), not on the torus; the container
/// records the values row-major with construction tag "eigen".
fgf::LatticeField sample_eigen_field(const ConstructionFlags& f) {
    const fgf::EigenSeriesConfig cfg{f.d, f.modes, f.n, f.s, f.seed};
    const fgf::BoxField b = fgf::sample_dirichlet_series(cfg, f.stream);
    fgf::LatticeField out(fgf::LatticeGrid(f.d, f.n, 1.0), b.values);
    out.construction = b.construction;
    out.seed = b.seed;
    out.exponent = b.exponent;
    out.params = {{"n_max", static_cast<double>(b.n_max)}};
    return out;
}

fgf::LatticeField sample_one(const ConstructionFlags& f) {
    if (f.construction == "eigen") return sample_eigen_field(f);
    return fgf::make_sampler(to_choice(f))(f.stream);
}

std::string default_sample_path(const ConstructionFlags& f) {
    return f.construction + "-d" + std::to_string(f.d) + "-n" + std::to_string(f.n) + "-seed" +
           std::to_string(f.seed) + (f.stream ? "-stream" + std::to_string(f.stream) : "") + ".fgf";
}

int cmd_sample(const ConstructionFlags& f, std::string out_path) {
    const fgf::LatticeField field = sample_one(f);
    if (out_path.empty()) out_path = default_sample_path(f);
    fgf::write_field_file(out_path, field);
    std::printf("%s\n%s\n", out_path.c_str(), fgf::detail::field_header_json(field).dump().c_str());
    return 0;
}

int cmd_estimate_cov(const ConstructionFlags& f, const std::string& x_text, const std::string& y_text,
                     std::size_t samples, int jobs) {
    const fgf::Point x = parse_point(x_text, f.d, "--x");
    const fgf::Point y = parse_point(y_text, f.d, "--y");
    if (f.construction == "eigen")
        throw CLI::ValidationError("--construction", "estimate-cov covers the torus constructions only");
    const fgf::SamplerChoice choice = to_choice(f);
    const fgf::FieldSampler sampler = fgf::make_sampler(choice);
    const std::size_t sx = choice.grid.nearest_site(x);
    const std::size_t sy = choice.grid.nearest_site(y);

    auto eval = [&](std::uint64_t stream, std::span<double> st) {
        const fgf::LatticeField field = sampler(stream);
        st[0] = field.values[sx];
        st[1] = field.values[sy];
    };
    const std::pair<std::size_t, std::size_t> want[] = {{0, 1}};
    const auto est = fgf::estimate_product_moments(eval, 2, want, samples, jobs);

    nlohmann::json j;
    j["construction"] = f.construction;
    j["d"] = f.d;
    j["x"] = x_text;
    j["y"] = y_text;
    j["samples"] = est[0].samples;
    j["estimate"] = est[0].value;
    j["standard_error"] = est[0].standard_error;
    std::printf("%s\n", j.dump().c_str());
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int jobs) {
    fgf::VerifyOptions opt;
    opt.seed = seed;
    opt.jobs = jobs;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<fgf::CheckResult> results = fgf::run_suite(suite, opt);
    std::size_t failed = 0;
    for (const fgf::CheckResult& r : results) {
        nlohmann::json j;
        j["check"] = r.check;
        j["parameters"] = r.parameters;
        j["statistic"] = r.statistic;
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        std::printf("%s\n", j.dump().c_str());
        if (!r.pass) ++failed;
    }
    std::fflush(stdout);
    std::fprintf(stderr, "suite=%s checks=%zu failed=%zu seconds=%.1f\n", suite.c_str(), results.size(), failed,
                 fgf::detail::elapsed_since(t0));
    return failed == 0 ? 0 : 1;
}

int cmd_export(const std::string& in_path, std::string out_path, const std::string& format) {
    if (format != "csv" && format != "tsv")
        throw CLI::ValidationError("--format", "expected csv or tsv, got " + format);
    const char sep = format == "csv" ? ',' : '\t';
    const fgf::LatticeField field = fgf::read_field_file(in_path);
    if (out_path.empty()) out_path = in_path + "." + format;

    std::ofstream os(out_path, std::ios::trunc);
    if (!os) throw std::runtime_error("export: cannot open " + out_path);
    os << "# " << fgf::detail::field_header_json(field).dump() << '\n';
    for (int a = 0; a < field.grid.dim(); ++a) os << 'x' << a << sep;
    os << "value\n";
    char buf[32];
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const fgf::Point p = field.grid.position(i);
        for (int a = 0; a < field.grid.dim(); ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", p[a]);
            os << buf << sep;
        }
        std::snprintf(buf, sizeof buf, "%.17g", field.values[i]);
        os << buf << '\n';
    }
    if (!os) throw std::runtime_error("export: write failed on " + out_path);
    std::printf("%s\n", out_path.c_str());
    return 0;
}

int cmd_slice(const std::string& in_path, std::string out_path, int axis, int index) {
    const fgf::LatticeField field = fgf::read_field_file(in_path);
    const fgf::LatticeField sub = fgf::slice_field(field, axis, index);
    if (out_path.empty())
        out_path = in_path + ".ax" + std::to_string(axis) + "i" + std::to_string(index) + ".fgf";
    fgf::write_field_file(out_path, sub);
    std::printf("%s\n%s\n", out_path.c_str(), fgf::detail::field_header_json(sub).dump().c_str());
    return 0;
}

int cmd_levelset(const std::string& in_path, std::string out_path, double threshold) {
    if (!std::isfinite(threshold)) throw CLI::ValidationError("--threshold", "threshold must be finite");
    const fgf::LatticeField field = fgf::read_field_file(in_path);
    if (out_path.empty()) out_path = in_path + ".mask";
    fgf::write_mask_file(out_path, field, threshold);
    const std::vector<std::uint8_t> mask = fgf::level_set_mask(field, threshold);
    std::size_t above = 0;
    for (std::uint8_t m : mask) above += m;
    std::printf("%s\n{\"sites\":%zu,\"above\":%zu}\n", out_path.c_str(), mask.size(), above);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Gaussian field laboratory: samplers, estimators, verification, export"};
    app.require_subcommand(1);

    ConstructionFlags sample_flags;
    std::string sample_out;
    CLI::App* sample = app.add_subcommand("sample", "draw one field and write it as a field file");
    add_construction_flags(sample, sample_flags);
    sample->add_option("--out", sample_out, "output path (default derived from the flags)");

    ConstructionFlags est_flags;
    std::string est_x = "0", est_y = "0";
    std::size_t est_samples = 10000;
    int est_jobs = 1;
    CLI::App* est = app.add_subcommand("estimate-cov",
                                       "Monte-Carlo covariance of the field between two points (nearest sites)");
    add_construction_flags(est, est_flags);
    est->add_option("--x", est_x, "first point, comma-separated coordinates")->capture_default_str();
    est->add_option("--y", est_y, "second point, comma-separated coordinates")->capture_default_str();
    est->add_option("--samples", est_samples, "Monte-Carlo sample count")->capture_default_str();
    est->add_option("--jobs", est_jobs, "worker threads (does not change the estimate)")->capture_default_str();

    std::string verify_suite = "fast";
    std::uint64_t verify_seed = 2026;
    int verify_jobs = 1;
    CLI::App* verify = app.add_subcommand("verify", "run verification checks; one JSON record per check");
    verify->add_option("suite", verify_suite, "fast | full | check group name")->capture_default_str();
    verify->add_option("--suite", verify_suite, "same as the positional selector");
    verify->add_option("--seed", verify_seed, "base seed for all checks (env FGFLAB_SEED overrides this default)")
        ->envname("FGFLAB_SEED")
        ->capture_default_str();
    verify->add_option("--jobs", verify_jobs, "worker threads (does not change any statistic)")
        ->capture_default_str();

    std::string export_in, export_out, export_format = "csv";
    CLI::App* exp = app.add_subcommand("export", "write a field file as a coordinate/value table");
    exp->add_option("--in", export_in, "field file to read")->required();
    exp->add_option("--out", export_out, "output path (default <in>.<format>)");
    exp->add_option("--format", export_format, "csv | tsv")->capture_default_str();

    std::string slice_in, slice_out;
    int slice_axis = 0, slice_index = 0;
    CLI::App* slice = app.add_subcommand("slice", "restrict a field file to one lattice hyperplane");
    slice->add_option("--in", slice_in, "field file to read")->required();
    slice->add_option("--out", slice_out, "output path (default derived from the flags)");
    slice->add_option("--axis", slice_axis, "axis to pin")->capture_default_str();
    slice->add_option("--index", slice_index, "lattice index along the pinned axis")->capture_default_str();

    std::string level_in, level_out;
    double level_threshold = 0.0;
    CLI::App* level = app.add_subcommand("levelset", "write the mask of sites with value >= threshold");
    level->add_option("--in", level_in, "field file to read")->required();
    level->add_option("--out", level_out, "output path (default <in>.mask)");
    level->add_option("--threshold", level_threshold, "level-set threshold")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) return cmd_sample(sample_flags, sample_out);
        if (est->parsed()) return cmd_estimate_cov(est_flags, est_x, est_y, est_samples, est_jobs);
        if (verify->parsed()) return cmd_verify(verify_suite, verify_seed, verify_jobs);
        if (exp->parsed()) return cmd_export(export_in, export_out, export_format);
        if (slice->parsed()) return cmd_slice(slice_in, slice_out, slice_axis, slice_index);
        if (level->parsed()) return cmd_levelset(level_in, level_out, level_threshold);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
