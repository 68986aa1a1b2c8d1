// runner.cpp — Strict run configuration, subcommand drivers and output layout

#include "giant/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "giant/collective.hpp"
#include "giant/dynamics.hpp"
#include "giant/error.hpp"
#include "giant/observables.hpp"
#include "giant/parallel.hpp"
#include "giant/version.hpp"

namespace giant::run {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Reads keys from one config object, fills defaults into `resolved` and
// rejects anything it was not asked about.
class Section {
public:
    Section(const json* node, std::string path, ojson& resolved)
        : node_(node), path_(std::move(path)), resolved_(resolved) {
        if (node_ && !node_->is_object()) throw ConfigError("config section '" + path_ + "' must be an object");
        resolved_ = ojson::object();
    }

    bool has(const char* key) const { return node_ && node_->contains(key) && !(*node_)[key].is_null(); }

    const json* raw(const char* key) {
        used_.insert(key);
        return has(key) ? &(*node_)[key] : nullptr;
    }

    int get_int(const char* key, int fallback) {
        int v = fallback;
        if (const auto* n = raw(key)) {
            if (!n->is_number_integer()) throw type_error(key, "an integer");
            v = n->get<int>();
        }
        resolved_[key] = v;
        return v;
    }

    double get_double(const char* key, double fallback) {
        double v = fallback;
        if (const auto* n = raw(key)) {
            if (!n->is_number()) throw type_error(key, "a number");
            v = n->get<double>();
        }
        if (!std::isfinite(v)) throw ConfigError("config key '" + qualified(key) + "' must be finite");
        resolved_[key] = v;
        return v;
    }

    bool get_bool(const char* key, bool fallback) {
        bool v = fallback;
        if (const auto* n = raw(key)) {
            if (!n->is_boolean()) throw type_error(key, "a boolean");
            v = n->get<bool>();
        }
        resolved_[key] = v;
        return v;
    }

    std::string get_string(const char* key, std::string fallback) {
        std::string v = std::move(fallback);
        if (const auto* n = raw(key)) {
            if (!n->is_string()) throw type_error(key, "a string");
            v = n->get<std::string>();
        }
        resolved_[key] = v;
        return v;
    }

    std::vector<double> get_doubles(const char* key, std::vector<double> fallback) {
        std::vector<double> v = std::move(fallback);
        if (const auto* n = raw(key)) {
            if (!n->is_array()) throw type_error(key, "an array of numbers");
            v.clear();
            for (const auto& e : *n) {
                if (!e.is_number()) throw type_error(key, "an array of numbers");
                v.push_back(e.get<double>());
            }
        }
        resolved_[key] = v;
        return v;
    }

    std::vector<int> get_ints(const char* key, std::vector<int> fallback) {
        std::vector<int> v = std::move(fallback);
        if (const auto* n = raw(key)) {
            if (n->is_number_integer()) {
                v = {n->get<int>()};
            } else {
                if (!n->is_array()) throw type_error(key, "an integer or an array of integers");
                v.clear();
                for (const auto& e : *n) {
                    if (!e.is_number_integer()) throw type_error(key, "an integer or an array of integers");
                    v.push_back(e.get<int>());
                }
            }
        }
        resolved_[key] = v;
        return v;
    }

    IntVec get_vec(const char* key, int dimension, IntVec fallback) {
        IntVec v = fallback;
        if (const auto* n = raw(key)) v = to_vec(*n, key, dimension);
        resolved_[key] = std::vector<int>(v.begin(), v.begin() + dimension);
        return v;
    }

    std::vector<IntVec> get_vecs(const char* key, int dimension, std::vector<IntVec> fallback) {
        std::vector<IntVec> v = std::move(fallback);
        if (const auto* n = raw(key)) {
            if (!n->is_array()) throw type_error(key, "an array of integer vectors");
            v.clear();
            for (const auto& e : *n) v.push_back(to_vec(e, key, dimension));
        }
        ojson out = ojson::array();
        for (const auto& p : v) out.push_back(std::vector<int>(p.begin(), p.begin() + dimension));
        resolved_[key] = out;
        return v;
    }

    void record(const char* key, ojson value) { resolved_[key] = std::move(value); }

    void finish() const {
        if (!node_) return;
        for (const auto& [key, _] : node_->items())
            if (!used_.contains(key)) throw ConfigError("unknown key '" + qualified(key) + "'");
    }

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    ConfigError type_error(const char* key, const char* expected) const {
        return ConfigError("config key '" + qualified(key) + "' must be " + expected);
    }

    IntVec to_vec(const json& n, const char* key, int dimension) const {
        if (!n.is_array() || static_cast<int>(n.size()) != dimension)
            throw ConfigError("config key '" + qualified(key) + "' needs integer vectors of length " +
                              std::to_string(dimension));
        IntVec v{};
        for (int a = 0; a < dimension; ++a) {
            const auto& e = n[static_cast<std::size_t>(a)];
            if (!e.is_number_integer()) throw type_error(key, "integer vectors");
            v[static_cast<std::size_t>(a)] = e.get<int>();
        }
        return v;
    }

    const json* node_;
    std::string path_;
    ojson& resolved_;
    std::set<std::string> used_;
};

struct ScheduleConfig {
    std::string kind{"smooth_two_site"};
    double omega{4.0};
    double g{0.1};
    std::vector<IntVec> positions;
    std::vector<Complex> amplitudes;
    std::vector<Segment> segments;
};

struct EmitterConfig {
    std::string kind{"design"};  // design | profile | gk_file | schedule
    Design design{Design::local};
    double g{0.1};
    double omega_e{0.0};
    IntVec center{};
    std::optional<CouplingProfile> profile;
    std::filesystem::path gk_file;
    std::optional<ScheduleConfig> schedule;
};

struct IntegrationConfig {
    double dt{0.01};
    double t_final{10.0};
    std::vector<double> snapshots;
    int series_stride{1};
    double norm_drift_rate{1e-9};
};

struct ObservablesConfig {
    std::vector<std::string> fields{"bath_real"};
    FieldFormat format{FieldFormat::binary_f64};
    bool quadrants{true};
    std::vector<int> target_quadrants;
    std::optional<std::array<double, 2>> cone_direction;
    double cone_half_angle{std::numbers::pi / 8.0};
    std::optional<std::array<double, 2>> fit_window;
    double eta{0.0};
    std::optional<int> beyond_radius;
    bool asymptotic{false};
};

struct FloquetConfig {
    std::vector<double> omegas{1.0, 2.0, 4.0, 8.0};
    std::string schedule{"smooth_two_site"};
    double g{0.1};
    int n_p{2};
    double t_final{20.0};
    double sample_dt{0.1};
    int j_max{256};
};

struct DesignConfig {
    std::string target{"chiral"};
    std::vector<int> n_tr{16};
    double g{0.1};
    std::filesystem::path gk_file;
};

struct InteractionsConfig {
    std::vector<IntVec> positions;
    double eta{0.0};
    std::vector<double> eta_list;
};

struct RunConfig {
    BathSpec bath;
    EmitterConfig emitter;
    IntegrationConfig integration;
    ObservablesConfig observables;
    FloquetConfig floquet;
    DesignConfig design;
    InteractionsConfig interactions;
    int spectral_bins{200};
    std::filesystem::path output_dir;
    long long seed{0};
    ojson resolved;
};

std::filesystem::path resolve_path(const std::string& p, const std::filesystem::path& base) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

Envelope parse_envelope(const std::string& name) {
    if (name == "step") return Envelope::step;
    if (name == "raised_cosine") return Envelope::raised_cosine;
    throw ConfigError("unknown envelope '" + name + "' (expected step or raised_cosine)");
}

ScheduleConfig parse_schedule(const json& node, const std::string& path, int dimension, ojson& resolved) {
    Section s(&node, path, resolved);
    ScheduleConfig c;
    c.kind = s.get_string("kind", c.kind);
    c.omega = s.get_double("omega", c.omega);
    if (c.kind == "smooth_two_site") {
        c.g = s.get_double("g", c.g);
        c.positions = s.get_vecs("positions", dimension, {IntVec{}, dimension == 1 ? IntVec{1, 0, 0} : IntVec{1, 1, 0}});
        if (c.positions.size() != 2) throw ConfigError("'" + path + ".positions' needs exactly two sites");
    } else if (c.kind == "step") {
        c.positions = s.get_vecs("positions", dimension, {});
        if (c.positions.empty()) throw ConfigError("'" + path + ".positions' is required for step schedules");
        const auto amps = s.get_doubles("amplitudes", std::vector<double>(c.positions.size(), 0.1));
        if (amps.size() != c.positions.size())
            throw ConfigError("'" + path + ".amplitudes' must match the number of positions");
        for (double a : amps) c.amplitudes.emplace_back(a, 0.0);
    } else if (c.kind == "custom") {
        const json* segs = s.raw("segments");
        if (!segs || !segs->is_array() || segs->empty())
            throw ConfigError("'" + path + ".segments' must be a non-empty array");
        ojson out = ojson::array();
        for (std::size_t i = 0; i < segs->size(); ++i) {
            ojson rs;
            Section seg(&(*segs)[i], path + ".segments[" + std::to_string(i) + "]", rs);
            Segment g;
            g.offset = seg.get_vec("offset", dimension, {});
            g.amplitude = {seg.get_double("re", 0.0), seg.get_double("im", 0.0)};
            g.envelope = parse_envelope(seg.get_string("envelope", "step"));
            g.slot = seg.get_int("slot", 0);
            g.slots = seg.get_int("slots", 1);
            g.phase = seg.get_double("phase", 0.0);
            seg.finish();
            c.segments.push_back(g);
            out.push_back(rs);
        }
        s.record("segments", out);
    } else {
        throw ConfigError("unknown schedule kind '" + c.kind + "' (expected smooth_two_site, step or custom)");
    }
    s.finish();
    return c;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config document must be an object");
    static const std::set<std::string> top{"bath",     "emitter", "integration",  "observables", "floquet",
                                           "design",   "spectral", "interactions", "output_dir",  "seed"};
    for (const auto& [key, _] : doc.items())
        if (!top.contains(key)) throw ConfigError("unknown key '" + key + "'");
    const auto section = [&](const char* key) -> const json* { return doc.contains(key) ? &doc[key] : nullptr; };

    RunConfig c;
    c.resolved = ojson::object();

    {
        Section s(section("bath"), "bath", c.resolved["bath"]);
        c.bath.dimension = s.get_int("dimension", 2);
        c.bath.size = s.get_int("size", 64);
        c.bath.model = parse_model(s.get_string("model", c.bath.dimension == 3 ? "bcc_tb" : "square_tb"));
        c.bath.hopping = s.get_double("hopping", 1.0);
        c.bath.band_center = s.get_double("band_center", 0.0);
        s.finish();
        c.bath.validate();
    }
    const int dim = c.bath.dimension;

    {
        Section s(section("emitter"), "emitter", c.resolved["emitter"]);
        auto& e = c.emitter;
        const char* sources[] = {"design", "profile", "profile_file", "gk_file", "schedule"};
        int present = 0;
        for (const char* k : sources) present += s.has(k) ? 1 : 0;
        if (present > 1)
            throw ConfigError("emitter takes exactly one of design, profile, profile_file, gk_file or schedule");
        e.omega_e = s.get_double("omega_e", c.bath.band_center);
        e.center = s.get_vec("center", dim, {});
        if (s.has("profile") || s.has("profile_file")) {
            e.kind = "profile";
            std::string text;
            if (const auto* p = s.raw("profile")) {
                text = p->dump();
            } else {
                const auto path = resolve_path(s.get_string("profile_file", ""), base);
                std::ifstream in(path);
                if (!in) throw IoError("cannot read profile file '" + path.string() + "'");
                std::stringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            }
            e.profile = profile_from_json(text);
            if (s.has("center")) e.profile->center = e.center;
            if (e.profile->dimension != dim) throw ConfigError("emitter profile dimension does not match the bath");
            s.record("profile", ojson::parse(profile_to_json(*e.profile)));
        } else if (s.has("gk_file")) {
            e.kind = "gk_file";
            e.gk_file = resolve_path(s.get_string("gk_file", ""), base);
        } else if (s.has("schedule")) {
            e.kind = "schedule";
            ojson rs;
            e.schedule = parse_schedule(*s.raw("schedule"), "emitter.schedule", dim, rs);
            s.record("schedule", rs);
        } else {
            e.kind = "design";
            e.design = parse_design(s.get_string("design", "local"));
            e.g = s.get_double("g", 0.1);
            if (!(e.g > 0.0)) throw ConfigError("emitter.g must be positive");
        }
        s.finish();
    }

    {
        Section s(section("integration"), "integration", c.resolved["integration"]);
        auto& in = c.integration;
        in.dt = s.get_double("dt", in.dt);
        in.t_final = s.get_double("t_final", in.t_final);
        in.snapshots = s.get_doubles("snapshots", {in.t_final});
        in.series_stride = s.get_int("series_stride", in.series_stride);
        in.norm_drift_rate = s.get_double("norm_drift_rate", in.norm_drift_rate);
        s.finish();
        if (!(in.t_final >= 0.0)) throw ConfigError("integration.t_final must be non-negative");
        if (in.series_stride < 0) throw ConfigError("integration.series_stride must be non-negative");
    }

    {
        Section s(section("observables"), "observables", c.resolved["observables"]);
        auto& o = c.observables;
        const json* fields = s.raw("fields");
        if (fields) {
            if (!fields->is_array()) throw ConfigError("config key 'observables.fields' must be an array of strings");
            o.fields.clear();
            for (const auto& f : *fields) {
                if (!f.is_string()) throw ConfigError("config key 'observables.fields' must be an array of strings");
                const auto name = f.get<std::string>();
                if (name != "bath_real" && name != "bath_momentum")
                    throw ConfigError("unknown field '" + name + "' (expected bath_real or bath_momentum)");
                o.fields.push_back(name);
            }
        }
        s.record("fields", o.fields);
        o.format = parse_field_format(s.get_string("field_format", "binary_f64"));
        o.quadrants = s.get_bool("quadrants", dim == 2);
        o.target_quadrants = s.get_ints("target_quadrants", {});
        for (int q : o.target_quadrants)
            if (q < 1 || q > 4) throw ConfigError("observables.target_quadrants entries must lie in 1..4");
        if (s.has("cone_direction")) {
            const auto d = s.get_doubles("cone_direction", {});
            if (d.size() != 2) throw ConfigError("observables.cone_direction needs two components");
            o.cone_direction = std::array<double, 2>{d[0], d[1]};
        } else {
            s.record("cone_direction", nullptr);
        }
        o.cone_half_angle = s.get_double("cone_half_angle", o.cone_half_angle);
        if (s.has("fit_window")) {
            const auto w = s.get_doubles("fit_window", {});
            if (w.size() != 2) throw ConfigError("observables.fit_window needs [start, end]");
            o.fit_window = std::array<double, 2>{w[0], w[1]};
        } else {
            s.record("fit_window", nullptr);
        }
        o.eta = s.get_double("eta", 8.0 * std::numbers::pi * c.bath.hopping / c.bath.size);
        if (s.has("beyond_radius")) {
            o.beyond_radius = s.get_int("beyond_radius", 0);
        } else {
            s.record("beyond_radius", nullptr);
        }
        o.asymptotic = s.get_bool("asymptotic", false);
        s.finish();
    }

    {
        Section s(section("floquet"), "floquet", c.resolved["floquet"]);
        auto& f = c.floquet;
        f.omegas = s.get_doubles("omegas", f.omegas);
        f.schedule = s.get_string("schedule", f.schedule);
        f.g = s.get_double("g", f.g);
        f.n_p = s.get_int("n_p", f.n_p);
        f.t_final = s.get_double("t_final", f.t_final);
        f.sample_dt = s.get_double("sample_dt", f.sample_dt);
        f.j_max = s.get_int("j_max", f.j_max);
        s.finish();
    }

    {
        Section s(section("design"), "design", c.resolved["design"]);
        auto& d = c.design;
        if (s.has("gk_file")) {
            d.gk_file = resolve_path(s.get_string("gk_file", ""), base);
            d.target = "user";
            s.record("target", "user");
        } else {
            d.target = s.get_string("target", d.target);
            parse_design(d.target);
            s.record("gk_file", nullptr);
        }
        d.n_tr = s.get_ints("n_tr", d.n_tr);
        d.g = s.get_double("g", d.g);
        s.finish();
    }

    {
        Section s(section("interactions"), "interactions", c.resolved["interactions"]);
        auto& i = c.interactions;
        const double unit = std::numbers::pi * c.bath.hopping / c.bath.size;
        i.positions = s.get_vecs("positions", dim, {IntVec{}});
        i.eta = s.get_double("eta", 16.0 * unit);
        i.eta_list = s.get_doubles("eta_list", {32.0 * unit, 16.0 * unit, 8.0 * unit});
        s.finish();
    }

    {
        Section s(section("spectral"), "spectral", c.resolved["spectral"]);
        c.spectral_bins = s.get_int("bins", 200);
        s.finish();
    }

    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) throw ConfigError("config key 'output_dir' must be a string");
        c.output_dir = resolve_path(doc["output_dir"].get<std::string>(), base);
        c.resolved["output_dir"] = doc["output_dir"];
    } else {
        c.resolved["output_dir"] = nullptr;
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw ConfigError("config key 'seed' must be an integer");
        c.seed = doc["seed"].get<long long>();
    }
    c.resolved["seed"] = c.seed;
    return c;
}

// ---------------------------------------------------------------------------

struct Output {
    std::filesystem::path root;

    std::filesystem::path dir(const char* sub) const {
        const auto d = root / sub;
        std::error_code ec;
        std::filesystem::create_directories(d, ec);
        if (ec) throw IoError("cannot create directory '" + d.string() + "': " + ec.message());
        return d;
    }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string vec_string(const IntVec& v, int dim) {
    std::string s = "(";
    for (int a = 0; a < dim; ++a) s += (a ? "," : "") + std::to_string(v[static_cast<std::size_t>(a)]);
    return s + ")";
}

DriveSchedule build_schedule(const ScheduleConfig& s, int dim, const IntVec& center) {
    if (s.kind == "smooth_two_site") {
        const auto sched = smooth_two_site_schedule(s.g, s.omega, s.positions[0], s.positions[1], dim);
        return DriveSchedule(dim, s.omega, sched.segments(), center);
    }
    if (s.kind == "step") {
        const auto sched = step_schedule(s.positions, s.amplitudes, s.omega, dim);
        return DriveSchedule(dim, s.omega, sched.segments(), center);
    }
    return DriveSchedule(dim, s.omega, s.segments, center);
}

struct ResolvedEmitter {
    EmitterCoupling coupling;
    MomentumCoupling gk;              // static part (time average for schedules)
    CouplingProfile footprint;        // real-space sites for geometric metrics
    bool has_footprint{true};
    std::string label;
};

ResolvedEmitter resolve_emitter(const RunConfig& c, const Lattice& lattice) {
    const auto& e = c.emitter;
    const int dim = lattice.dimension();
    ResolvedEmitter r{CouplingProfile{}, {}, {}, true, {}};
    if (e.kind == "profile") {
        r.coupling = *e.profile;
        r.gk = gk_from_profile(*e.profile, lattice);
        r.footprint = *e.profile;
        r.label = e.profile->design.empty() ? "profile" : e.profile->design;
    } else if (e.kind == "gk_file") {
        MomentumCoupling gk{read_gk_csv(e.gk_file, lattice.mode_count()), "user-file", "user"};
        r.coupling = gk;
        r.gk = gk;
        r.footprint = inverse_design(gk, lattice);
        r.label = "user";
    } else if (e.kind == "schedule") {
        const auto sched = build_schedule(*e.schedule, dim, e.center);
        r.coupling = sched;
        r.footprint = sched.footprint();
        r.gk = gk_from_profile(time_average(sched), lattice);
        r.label = "schedule";
    } else {
        auto design = named_design(e.design, e.g, lattice);
        if (auto* p = std::get_if<CouplingProfile>(&design)) {
            p->center = e.center;
            r.coupling = *p;
            r.gk = gk_from_profile(*p, lattice);
            r.footprint = *p;
        } else {
            auto gk = std::get<MomentumCoupling>(design);
            if (e.center != IntVec{})
                for (std::size_t k = 0; k < gk.values.size(); ++k) gk.values[k] *= lattice.plane_wave(k, e.center);
            r.coupling = gk;
            r.gk = gk;
            r.has_footprint = false;
            r.footprint.dimension = dim;
            r.footprint.center = e.center;
            r.footprint.sites = {Site{{}, Complex{1.0, 0.0}}};
        }
        r.label = to_string(e.design);
    }
    return r;
}

ojson warnings_json(const std::vector<std::string>& w) { return w.empty() ? ojson::array() : ojson(w); }

std::string snapshot_name(const char* stem, std::size_t i, FieldFormat f) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, f == FieldFormat::pgm8 ? "pgm" : "f64");
    return buf;
}

ojson cmd_simulate(const RunConfig& c, const Output& out, double dt) {
    const Lattice lattice(c.bath);
    const auto em = resolve_emitter(c, lattice);
    const auto& o = c.observables;
    EvolveOptions opt;
    opt.dt = dt;
    opt.series_stride = c.integration.series_stride;
    opt.norm_drift_rate = c.integration.norm_drift_rate;
    const auto traj = evolve(lattice, {c.emitter.omega_e, em.coupling}, c.integration.t_final, c.integration.snapshots, opt);

    ojson results;
    results["steps"] = traj.steps;
    results["max_step"] = traj.max_step;
    results["norm_drift"] = traj.norm_drift;
    results["final_emitter_population"] = std::norm(traj.snapshots.empty() ? Complex{} : traj.snapshots.back().emitter);

    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < traj.series_times.size(); ++i) {
            const auto ce = traj.series_emitter[i];
            rows.push_back({traj.series_times[i], std::norm(ce), ce.real(), ce.imag()});
        }
        write_series_csv(out.dir("series") / "emitter.csv", {"t", "population", "re", "im"}, rows);
    }

    std::vector<std::size_t> shape;
    for (int a = 0; a < lattice.dimension(); ++a) shape.push_back(static_cast<std::size_t>(lattice.size()));
    const auto fields_dir = o.fields.empty() ? std::filesystem::path{} : out.dir("fields");
    ojson field_list = ojson::array();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& snap = traj.snapshots[i];
        for (const auto& f : o.fields) {
            FieldMeta meta{shape, snap.time, {{"quantity", "density"}, {"field", f}, {"design", em.label}}};
            const bool real = f == "bath_real";
            meta.metadata["space"] = real ? "real" : "momentum";
            const auto name = snapshot_name(f.c_str(), i, o.format);
            if (real) {
                const auto sites = bath_realspace(snap, lattice);
                export_field(std::span<const Complex>(sites), meta, fields_dir / name, o.format);
            } else {
                export_field(std::span<const Complex>(snap.bath), meta, fields_dir / name, o.format);
            }
            field_list.push_back({{"file", "fields/" + name}, {"time", snap.time}});
        }
    }
    results["fields"] = field_list;

    if (o.quadrants && lattice.dimension() == 2) {
        std::vector<std::vector<double>> rows;
        ojson misses = ojson::array();
        for (const auto& snap : traj.snapshots) {
            if (snap.bath_population() <= 0.0) continue;
            const auto q = quadrant_fractions(snap, lattice);
            rows.push_back({snap.time, q[1], q[2], q[3], q[4]});
            if (!o.target_quadrants.empty()) misses.push_back(q.miss(o.target_quadrants));
        }
        write_series_csv(out.dir("series") / "quadrants.csv", {"t", "F1", "F2", "F3", "F4"}, rows);
        if (!rows.empty()) {
            const auto& last = rows.back();
            results["quadrants"] = {last[1], last[2], last[3], last[4]};
        }
        if (!o.target_quadrants.empty()) results["miss_fraction"] = misses;
    }

    const auto& final_state = traj.snapshots.back();
    std::vector<Complex> final_sites;
    const bool need_sites = o.cone_direction || o.beyond_radius;
    if (need_sites) final_sites = bath_realspace(final_state, lattice);

    if (o.cone_direction) {
        if (lattice.dimension() != 2) throw ConfigError("observables.cone_direction needs a 2D bath");
        const auto centroid = footprint_centroid(em.footprint);
        results["cone_fraction"] = directional_mask_population(final_sites, lattice, *o.cone_direction,
                                                               o.cone_half_angle, {centroid[0], centroid[1]});
    }
    if (o.beyond_radius)
        results["population_beyond_radius"] = population_beyond_radius(final_sites, lattice, em.footprint, *o.beyond_radius);
    if (o.fit_window) {
        const auto fit = survival_and_rate(traj, (*o.fit_window)[0], (*o.fit_window)[1], em.gk, lattice,
                                           c.emitter.omega_e, o.eta);
        results["fitted_rate"] = fit.fitted_rate;
        results["golden_rule_rate"] = fit.golden_rule_rate;
        results["fit_warnings"] = warnings_json(fit.warnings);
    }
    if (o.asymptotic) {
        const double gamma = golden_rule_rate(em.gk, lattice, c.emitter.omega_e, o.eta);
        const auto expected = asymptotic_bath(lattice, em.gk, c.emitter.omega_e, gamma, final_state.time);
        const auto a = magnitudes(final_state.bath);
        const auto b = magnitudes(expected);
        results["asymptotic_similarity"] = cosine_similarity(a, b);
    }
    results["warnings"] = warnings_json(traj.warnings);
    return results;
}

ojson cmd_design(const RunConfig& c, const Output& out) {
    const Lattice lattice(c.bath);
    const auto& d = c.design;
    MomentumCoupling gk;
    if (!d.gk_file.empty()) {
        gk = {read_gk_csv(d.gk_file, lattice.mode_count()), "user-file", "user"};
    } else {
        gk = design_gk(parse_design(d.target), d.g, lattice);
    }
    const auto full = inverse_design(gk, lattice);
    const double total = full.mass();
    if (!(total > 0.0)) throw ConfigError("design target has vanishing coupling");
    std::vector<int> sizes = d.n_tr;
    std::sort(sizes.begin(), sizes.end());
    if (sizes.empty()) throw ConfigError("design.n_tr needs at least one value");

    std::vector<std::vector<double>> rows;
    ojson files = ojson::array();
    const auto dir = out.dir("profiles");
    for (int n : sizes) {
        auto p = truncate(full, n);
        p.design = d.target;
        const auto name = "profile_n" + std::to_string(n) + ".json";
        write_text(dir / name, profile_to_json(p) + "\n");
        files.push_back("profiles/" + name);
        rows.push_back({static_cast<double>(n), static_cast<double>(p.support_size()), p.mass() / total});
    }
    write_series_csv(out.dir("series") / "design_summary.csv", {"n_tr", "support", "kept_mass_fraction"}, rows);
    ojson results;
    results["profiles"] = files;
    results["full_support"] = full.support_size();
    ojson kept = ojson::array();
    for (const auto& r : rows) kept.push_back(r[2]);
    results["kept_mass_fraction"] = kept;
    return results;
}

ojson cmd_floquet(const RunConfig& c, const Output& out, double dt) {
    const auto& f = c.floquet;
    if (f.omegas.size() < 2) throw ConfigError("floquet.omegas needs at least two drive frequencies");
    for (double w : f.omegas)
        if (!(w > 0.0)) throw ConfigError("floquet.omegas must be positive");
    if (!(f.t_final > 0.0) || !(f.sample_dt > 0.0)) throw ConfigError("floquet.t_final and sample_dt must be positive");
    const Lattice lattice(c.bath);
    const int dim = lattice.dimension();

    std::vector<double> samples;
    const auto count = static_cast<long>(std::floor(f.t_final / f.sample_dt + 1e-9));
    for (long i = 0; i <= count; ++i) samples.push_back(std::min(f.t_final, static_cast<double>(i) * f.sample_dt));
    if (samples.back() < f.t_final) samples.push_back(f.t_final);

    EvolveOptions opt;
    opt.dt = dt;
    opt.series_stride = 0;
    opt.norm_drift_rate = c.integration.norm_drift_rate;

    std::vector<std::vector<double>> rows;
    ojson deviations = ojson::array();
    for (double w : f.omegas) {
        ScheduleConfig sc;
        sc.omega = w;
        sc.g = f.g;
        if (f.schedule == "smooth_two_site") {
            sc.kind = "smooth_two_site";
            sc.positions = {IntVec{}, dim == 1 ? IntVec{1, 0, 0} : IntVec{1, 1, 0}};
        } else if (f.schedule == "step") {
            if (f.n_p < 1) throw ConfigError("floquet.n_p must be at least 1");
            sc.kind = "step";
            for (int a = 0; a < f.n_p; ++a) {
                IntVec p{};
                for (int ax = 0; ax < dim; ++ax) p[static_cast<std::size_t>(ax)] = a;
                sc.positions.push_back(p);
                sc.amplitudes.emplace_back(f.g, 0.0);
            }
        } else {
            throw ConfigError("unknown floquet.schedule '" + f.schedule + "' (expected smooth_two_site or step)");
        }
        const auto sched = build_schedule(sc, dim, c.emitter.center);
        const auto moving = evolve(lattice, {c.emitter.omega_e, sched}, f.t_final, samples, opt);
        const auto effective = evolve(lattice, {c.emitter.omega_e, time_average(sched)}, f.t_final, samples, opt);
        double dev = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            dev = std::max(dev, std::abs(moving.snapshots[i].emitter - effective.snapshots[i].emitter));
        const double bound = first_order_norm_bound(f.g, sched.segments().size(), w);
        double norm = std::nan("");
        if (sched.is_step()) norm = first_order_correction(sched, f.j_max).operator_norm;
        rows.push_back({w, dev, bound, norm});
        deviations.push_back(dev);
    }
    write_series_csv(out.dir("series") / "floquet.csv", {"omega", "deviation", "bound", "correction_norm"}, rows);
    ojson results;
    results["deviations"] = deviations;
    return results;
}

ojson cmd_interactions(const RunConfig& c, const Output& out) {
    const Lattice lattice(c.bath);
    const auto em = resolve_emitter(c, lattice);
    const auto& in = c.interactions;
    MomentumCoupling gk = em.gk;
    // Positions carry the emitter phases, so strip the configured center.
    if (c.emitter.center != IntVec{})
        for (std::size_t k = 0; k < gk.values.size(); ++k)
            gk.values[k] *= std::conj(lattice.plane_wave(k, c.emitter.center));

    const auto m = collective_couplings(lattice, gk, in.positions, c.emitter.omega_e, in.eta);
    const auto ex = eta_extrapolation(lattice, gk, in.positions, c.emitter.omega_e, in.eta_list);

    const int dim = lattice.dimension();
    std::vector<std::string> header{"eta=" + format_double(in.eta), "omega_e=" + format_double(c.emitter.omega_e),
                                    "design=" + em.label};
    std::string pos = "positions=";
    for (std::size_t i = 0; i < in.positions.size(); ++i) pos += (i ? ";" : "") + vec_string(in.positions[i], dim);
    header.push_back(pos);
    auto ex_header = header;
    ex_header[0] = "eta=0 (extrapolated)";
    std::string list = "eta_list=";
    for (std::size_t i = 0; i < in.eta_list.size(); ++i) list += (i ? ";" : "") + format_double(in.eta_list[i]);
    ex_header.push_back(list);

    const auto dir = out.dir("matrices");
    write_matrix_csv(dir / "J.csv", m.J, {}, header);
    write_matrix_csv(dir / "gamma.csv", m.gamma, {}, header);
    write_matrix_csv(dir / "J_extrapolated.csv", ex.J, ex.J_error, ex_header);
    write_matrix_csv(dir / "gamma_extrapolated.csv", ex.gamma, ex.gamma_error, ex_header);
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < ex.spreads.size(); ++i) rows.push_back({in.eta_list[i + 1], ex.spreads[i]});
        write_series_csv(out.dir("series") / "eta_spreads.csv", {"eta", "spread"}, rows);
    }

    ojson results;
    results["hermiticity_residue"] = m.hermiticity_residue;
    results["gamma_min_eigenvalue"] = m.gamma_min_eigenvalue();
    results["gamma_max_eigenvalue"] = m.gamma_max_eigenvalue();
    results["gamma_11"] = m.gamma(0, 0).real();
    results["golden_rule_rate"] = golden_rule_rate(gk, lattice, c.emitter.omega_e, in.eta);
    if (m.emitter_count() >= 2) {
        results["abs_gamma_12"] = std::abs(m.gamma(0, 1));
        results["abs_J_12"] = std::abs(m.J(0, 1));
    }
    return results;
}

ojson cmd_spectral(const RunConfig& c, const Output& out) {
    const Lattice lattice(c.bath);
    const auto em = resolve_emitter(c, lattice);
    const auto sd = spectral_density(em.gk, lattice, c.spectral_bins);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sd.values.size(); ++i) rows.push_back({sd.bin_edges[i], sd.bin_edges[i + 1], sd.values[i]});
    write_series_csv(out.dir("series") / "spectral_density.csv", {"bin_lo", "bin_hi", "density"}, rows);
    ojson results;
    results["total_weight"] = sd.total_weight;
    results["center_value"] = sd.center_value();
    return results;
}

ojson error_record(const std::string& kind, const std::string& message, int exit_code, std::string_view subcommand) {
    ojson e;
    e["status"] = "error";
    e["kind"] = kind;
    e["message"] = message;
    e["exit_code"] = exit_code;
    e["subcommand"] = std::string(subcommand);
    e["version"] = version;
    return e;
}

} // namespace

std::vector<Complex> read_gk_csv(const std::filesystem::path& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read G(k) file '" + path.string() + "'");
    std::vector<Complex> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("G(k) file line " + std::to_string(line_no) + " is not a re,im pair");
        try {
            std::size_t used_re = 0, used_im = 0;
            const std::string re_s = line.substr(0, comma), im_s = line.substr(comma + 1);
            const double re = std::stod(re_s, &used_re);
            const double im = std::stod(im_s, &used_im);
            if (used_im != im_s.size() && im_s.find_first_not_of(" \t", used_im) != std::string::npos)
                throw std::invalid_argument("trailing");
            out.emplace_back(re, im);
        } catch (const std::exception&) {
            if (!header_seen && out.empty()) {
                header_seen = true;
                continue;
            }
            throw ConfigError("G(k) file line " + std::to_string(line_no) + " is not a re,im pair");
        }
    }
    if (out.size() != expected)
        throw ConfigError("G(k) file '" + path.string() + "' has " + std::to_string(out.size()) +
                          " samples, the grid needs " + std::to_string(expected));
    return out;
}

Outcome run_command(std::string_view subcommand, std::string_view config_text, const std::filesystem::path& base_dir,
                    const Overrides& overrides) {
    Outcome outcome;
    if (overrides.out_dir) outcome.out_dir = *overrides.out_dir;
    try {
        if (std::find(std::begin(subcommands), std::end(subcommands), subcommand) == std::end(subcommands))
            throw ConfigError("unknown subcommand '" + std::string(subcommand) + "'");
        if (overrides.threads < 0) throw ConfigError("--threads must be positive");
        if (overrides.dt && !(*overrides.dt > 0.0)) throw ConfigError("--dt must be positive");
        auto config = parse_config(config_text, base_dir);
        if (overrides.out_dir) config.output_dir = *overrides.out_dir;
        if (config.output_dir.empty()) throw ConfigError("no output directory: set output_dir or pass --out");
        outcome.out_dir = config.output_dir;
        const double dt = overrides.dt.value_or(config.integration.dt);
        config.resolved["integration"]["dt"] = dt;
        config.resolved["output_dir"] = config.output_dir.string();

        parallel::set_threads(overrides.threads);
        const Output out{config.output_dir};
        std::error_code ec;
        std::filesystem::create_directories(out.root, ec);
        if (ec) throw IoError("cannot create output directory '" + out.root.string() + "': " + ec.message());
        std::filesystem::remove(out.root / "error.json", ec);

        ojson results;
        if (subcommand == "simulate") results = cmd_simulate(config, out, dt);
        else if (subcommand == "design") results = cmd_design(config, out);
        else if (subcommand == "floquet-check") results = cmd_floquet(config, out, dt);
        else if (subcommand == "interactions") results = cmd_interactions(config, out);
        else results = cmd_spectral(config, out);

        ojson manifest;
        manifest["toolkit"] = "giant";
        manifest["version"] = version;
        manifest["subcommand"] = std::string(subcommand);
        manifest["config"] = config.resolved;
        manifest["results"] = results;
        write_text(out.root / "manifest.json", manifest.dump(2) + "\n");
        parallel::set_threads(0);
        return outcome;
    } catch (const Error& e) {
        outcome.exit_code = e.kind() == ErrorKind::config ? 2 : 1;
        outcome.error = error_record(to_string(e.kind()), e.what(), outcome.exit_code, subcommand);
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.error = error_record("internal", e.what(), 1, subcommand);
    }
    parallel::set_threads(0);
    if (!outcome.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(outcome.out_dir, ec);
        std::ofstream f(outcome.out_dir / "error.json", std::ios::trunc);
        if (f) f << outcome.error.dump(2) << '\n';
    }
    return outcome;
}

Outcome run_file(std::string_view subcommand, const std::filesystem::path& config_path, const Overrides& overrides) {
    std::ifstream in(config_path);
    if (!in) {
        Outcome o;
        o.exit_code = 2;
        o.error = error_record("config", "cannot read config file '" + config_path.string() + "'", 2, subcommand);
        return o;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return run_command(subcommand, ss.str(), config_path.parent_path(), overrides);
}

} // namespace giant::run
