#include "chemoctrl/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chemoctrl/errors.hpp"
#include "chemoctrl/snapshot.hpp"

namespace chemoctrl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, int line, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ConfigError("expected a number for '" + key + "', got '" + tok + "'", line);
    }
    if (pos != tok.size())
        throw ConfigError("expected a number for '" + key + "', got '" + tok + "'", line);
    return v;
}

int parse_int(const std::string& tok, int line, const std::string& key) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw ConfigError("expected an integer for '" + key + "', got '" + tok + "'", line);
    }
    if (pos != tok.size())
        throw ConfigError("expected an integer for '" + key + "', got '" + tok + "'", line);
    return static_cast<int>(v);
}

bool parse_bool(const std::string& tok, int line, const std::string& key) {
    if (tok == "true" || tok == "1" || tok == "yes" || tok == "on") return true;
    if (tok == "false" || tok == "0" || tok == "no" || tok == "off") return false;
    throw ConfigError("expected true/false for '" + key + "', got '" + tok + "'", line);
}

std::vector<double> parse_doubles(const std::string& value, int line, const std::string& key) {
    std::vector<double> out;
    for (const auto& tok : split_ws(value)) out.push_back(parse_double(tok, line, key));
    if (out.empty()) throw ConfigError("'" + key + "' needs at least one value", line);
    return out;
}

FieldSpec parse_field_spec(const std::string& value, int line, const std::string& key) {
    auto toks = split_ws(value);
    if (toks.empty())
        throw ConfigError("'" + key + "' needs a field spec (constant|gaussian|file ...)", line);
    FieldSpec spec;
    if (toks[0] == "constant") {
        if (toks.size() != 2)
            throw ConfigError("'" + key + "': constant takes exactly one value", line);
        spec.kind = FieldSpec::Kind::constant;
        spec.value = parse_double(toks[1], line, key);
    } else if (toks[0] == "gaussian") {
        // gaussian c0 [c1 [c2]] width amplitude offset
        if (toks.size() < 5 || toks.size() > 7)
            throw ConfigError(
                "'" + key + "': gaussian takes per-axis center, width, amplitude, offset", line);
        spec.kind = FieldSpec::Kind::gaussian;
        const std::size_t ncenter = toks.size() - 4;
        for (std::size_t i = 0; i < ncenter; ++i)
            spec.center.push_back(parse_double(toks[1 + i], line, key));
        spec.width = parse_double(toks[ncenter + 1], line, key);
        spec.amplitude = parse_double(toks[ncenter + 2], line, key);
        spec.offset = parse_double(toks[ncenter + 3], line, key);
    } else if (toks[0] == "file") {
        if (toks.size() != 2) throw ConfigError("'" + key + "': file takes exactly one path", line);
        spec.kind = FieldSpec::Kind::file;
        spec.path = toks[1];
    } else {
        throw ConfigError(
            "'" + key + "': unknown field spec kind '" + toks[0] + "' (constant|gaussian|file)",
            line);
    }
    return spec;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_field_spec(const FieldSpec& spec) {
    switch (spec.kind) {
        case FieldSpec::Kind::constant:
            return "constant " + fmt(spec.value);
        case FieldSpec::Kind::gaussian: {
            std::string s = "gaussian";
            for (double c : spec.center) s += " " + fmt(c);
            s += " " + fmt(spec.width) + " " + fmt(spec.amplitude) + " " + fmt(spec.offset);
            return s;
        }
        case FieldSpec::Kind::file:
            return "file " + spec.path;
    }
    return {};
}

struct Entry {
    std::string value;
    int line;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

// The full key schema; anything outside it is a typo and refuses to load.
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"grid", {"dims", "extent", "control_lo", "control_hi"}},
        {"time", {"horizon", "steps"}},
        {"physics", {"eps", "flux"}},
        {"initial", {"u0", "v0", "f"}},
        {"weights", {"alpha_u", "alpha_v", "alpha_f"}},
        {"box", {"f_min", "f_max"}},
        {"solver", {"tol", "max_iter", "diagonal_precondition"}},
        {"optimizer",
         {"method", "tol", "max_iter", "armijo_c1", "backtrack", "max_backtracks", "initial_step",
          "relaxation"}},
        {"targets", {"mode", "u", "v", "u_file", "v_file"}},
        {"output", {"directory", "snapshot_stride"}},
        {"sweep", {"eps_list"}},
    };
    return s;
}

SectionMap read_sections(std::istream& in) {
    SectionMap sections;
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        // '#' or ';' opens a comment when it starts the line or follows
        // whitespace, so values may still contain either character inline.
        for (std::size_t i = 0; i < t.size(); ++i) {
            if ((t[i] == '#' || t[i] == ';') &&
                (i == 0 || std::isspace(static_cast<unsigned char>(t[i - 1])))) {
                t = trim(t.substr(0, i));
                break;
            }
        }
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("unterminated section header", lineno);
            current = trim(t.substr(1, t.size() - 2));
            if (!schema().count(current))
                throw ConfigError("unknown section '" + current + "'", lineno);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' or a [section] header", lineno);
        if (current.empty()) throw ConfigError("key outside any [section]", lineno);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", lineno);
        if (!schema().at(current).count(key))
            throw ConfigError("unknown key '" + key + "' in section [" + current + "]", lineno);
        auto [it, inserted] = sections[current].emplace(key, Entry{value, lineno});
        (void)it;
        if (!inserted)
            throw ConfigError("duplicate key '" + key + "' in section [" + current + "]", lineno);
    }
    return sections;
}

// Lookup helpers: fetch() requires presence, opt() applies a default.
const Entry* find(const SectionMap& s, const std::string& sec, const std::string& key) {
    auto si = s.find(sec);
    if (si == s.end()) return nullptr;
    auto ki = si->second.find(key);
    if (ki == si->second.end()) return nullptr;
    return &ki->second;
}

const Entry& fetch(const SectionMap& s, const std::string& sec, const std::string& key) {
    const Entry* e = find(s, sec, key);
    if (!e) throw ConfigError("missing required key '" + key + "' in section [" + sec + "]", 0);
    return *e;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    SectionMap s = read_sections(in);
    RunConfig c;

    {
        const Entry& dims = fetch(s, "grid", "dims");
        c.dims.clear();
        for (const auto& tok : split_ws(dims.value))
            c.dims.push_back(parse_int(tok, dims.line, "dims"));
        if (c.dims.empty()) throw ConfigError("'dims' needs at least one value", dims.line);
        if (const Entry* e = find(s, "grid", "extent")) {
            c.extents.clear();
            for (const auto& tok : split_ws(e->value))
                c.extents.push_back(parse_double(tok, e->line, "extent"));
            if (c.extents.size() != c.dims.size())
                throw ConfigError("'extent' must give one length per axis", e->line);
        } else {
            c.extents.assign(c.dims.size(), 1.0);
        }
        const Entry* lo = find(s, "grid", "control_lo");
        const Entry* hi = find(s, "grid", "control_hi");
        if (static_cast<bool>(lo) != static_cast<bool>(hi))
            throw ConfigError("'control_lo' and 'control_hi' must be given together",
                              lo ? lo->line : hi->line);
        if (lo) {
            c.has_control_box = true;
            c.control_lo = parse_doubles(lo->value, lo->line, "control_lo");
            c.control_hi = parse_doubles(hi->value, hi->line, "control_hi");
            if (c.control_lo.size() != c.dims.size() || c.control_hi.size() != c.dims.size())
                throw ConfigError("control box needs one bound per axis", lo->line);
        }
    }

    c.horizon = parse_double(fetch(s, "time", "horizon").value, fetch(s, "time", "horizon").line,
                             "horizon");
    c.steps = parse_int(fetch(s, "time", "steps").value, fetch(s, "time", "steps").line, "steps");

    if (const Entry* e = find(s, "physics", "eps")) c.eps = parse_double(e->value, e->line, "eps");
    if (const Entry* e = find(s, "physics", "flux")) {
        if (e->value == "central")
            c.flux = FluxScheme::central;
        else if (e->value == "upwind")
            c.flux = FluxScheme::upwind;
        else
            throw ConfigError("'flux' must be central or upwind, got '" + e->value + "'", e->line);
    }

    c.u0 = parse_field_spec(fetch(s, "initial", "u0").value, fetch(s, "initial", "u0").line, "u0");
    c.v0 = parse_field_spec(fetch(s, "initial", "v0").value, fetch(s, "initial", "v0").line, "v0");
    if (const Entry* e = find(s, "initial", "f")) c.f0 = parse_field_spec(e->value, e->line, "f");

    if (const Entry* e = find(s, "weights", "alpha_u"))
        c.weights.alpha_u = parse_double(e->value, e->line, "alpha_u");
    if (const Entry* e = find(s, "weights", "alpha_v"))
        c.weights.alpha_v = parse_double(e->value, e->line, "alpha_v");
    if (const Entry* e = find(s, "weights", "alpha_f"))
        c.weights.alpha_f = parse_double(e->value, e->line, "alpha_f");

    if (const Entry* e = find(s, "box", "f_min"))
        c.box.lo = parse_double(e->value, e->line, "f_min");
    if (const Entry* e = find(s, "box", "f_max"))
        c.box.hi = parse_double(e->value, e->line, "f_max");

    if (const Entry* e = find(s, "solver", "tol"))
        c.helmholtz_tol = parse_double(e->value, e->line, "tol");
    if (const Entry* e = find(s, "solver", "max_iter"))
        c.helmholtz_max_iter = parse_int(e->value, e->line, "max_iter");
    if (const Entry* e = find(s, "solver", "diagonal_precondition"))
        c.diagonal_precondition = parse_bool(e->value, e->line, "diagonal_precondition");

    if (const Entry* e = find(s, "optimizer", "method")) {
        if (e->value == "projected_gradient")
            c.method = OptimizerMethod::projected_gradient;
        else if (e->value == "fixed_point")
            c.method = OptimizerMethod::fixed_point;
        else
            throw ConfigError(
                "'method' must be projected_gradient or fixed_point, got '" + e->value + "'",
                e->line);
    }
    if (const Entry* e = find(s, "optimizer", "tol"))
        c.opt_tol = parse_double(e->value, e->line, "tol");
    if (const Entry* e = find(s, "optimizer", "max_iter"))
        c.opt_max_iter = parse_int(e->value, e->line, "max_iter");
    if (const Entry* e = find(s, "optimizer", "armijo_c1"))
        c.armijo_c1 = parse_double(e->value, e->line, "armijo_c1");
    if (const Entry* e = find(s, "optimizer", "backtrack"))
        c.backtrack = parse_double(e->value, e->line, "backtrack");
    if (const Entry* e = find(s, "optimizer", "max_backtracks"))
        c.max_backtracks = parse_int(e->value, e->line, "max_backtracks");
    if (const Entry* e = find(s, "optimizer", "initial_step"))
        c.initial_step = parse_double(e->value, e->line, "initial_step");
    if (const Entry* e = find(s, "optimizer", "relaxation"))
        c.relaxation = parse_double(e->value, e->line, "relaxation");

    if (const Entry* e = find(s, "targets", "mode")) {
        if (e->value == "constant")
            c.targets.kind = TargetSpec::Kind::constant;
        else if (e->value == "file")
            c.targets.kind = TargetSpec::Kind::file;
        else if (e->value == "uncontrolled")
            c.targets.kind = TargetSpec::Kind::uncontrolled;
        else
            throw ConfigError(
                "'mode' must be constant, file, or uncontrolled, got '" + e->value + "'", e->line);
    }
    if (const Entry* e = find(s, "targets", "u"))
        c.targets.u_value = parse_double(e->value, e->line, "u");
    if (const Entry* e = find(s, "targets", "v"))
        c.targets.v_value = parse_double(e->value, e->line, "v");
    if (const Entry* e = find(s, "targets", "u_file")) c.targets.u_path = e->value;
    if (const Entry* e = find(s, "targets", "v_file")) c.targets.v_path = e->value;
    if (c.targets.kind == TargetSpec::Kind::file &&
        (c.targets.u_path.empty() || c.targets.v_path.empty()))
        throw ConfigError("targets mode 'file' requires both 'u_file' and 'v_file'", 0);

    if (const Entry* e = find(s, "output", "directory")) c.output_dir = e->value;
    if (const Entry* e = find(s, "output", "snapshot_stride"))
        c.snapshot_stride = parse_int(e->value, e->line, "snapshot_stride");

    if (const Entry* e = find(s, "sweep", "eps_list"))
        c.eps_list = parse_doubles(e->value, e->line, "eps_list");

    validate_config(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
    return parse_config(in);
}

void validate_config(const RunConfig& c) {
    // Constructing the grid and time axis runs their own validation.
    Grid grid = make_grid(c);
    (void)make_time_grid(c);

    if (!(c.eps >= 0.0)) throw InvalidInputError("eps must be nonnegative");
    if (!(c.helmholtz_tol > 0.0)) throw InvalidInputError("solver tol must be positive");
    if (c.helmholtz_max_iter < 0) throw InvalidInputError("solver max_iter must be nonnegative");
    validate_weights(c.weights, c.box);
    if (!(c.opt_tol > 0.0)) throw InvalidInputError("optimizer tol must be positive");
    if (c.opt_max_iter < 1) throw InvalidInputError("optimizer max_iter must be >= 1");
    if (!(c.armijo_c1 > 0.0 && c.armijo_c1 < 1.0))
        throw InvalidInputError("armijo_c1 must lie in (0, 1)");
    if (!(c.backtrack > 0.0 && c.backtrack < 1.0))
        throw InvalidInputError("backtrack must lie in (0, 1)");
    if (c.max_backtracks < 0) throw InvalidInputError("max_backtracks must be nonnegative");
    if (!(c.initial_step > 0.0)) throw InvalidInputError("initial_step must be positive");
    if (!(c.relaxation > 0.0 && c.relaxation <= 1.0))
        throw InvalidInputError("relaxation must lie in (0, 1]");
    if (c.snapshot_stride < 1) throw InvalidInputError("snapshot_stride must be >= 1");
    for (double e : c.eps_list)
        if (!(e > 0.0)) throw InvalidInputError("eps_list entries must be positive");
    if (c.eps_list.empty()) throw InvalidInputError("eps_list must not be empty");

    auto check_spec = [&](const FieldSpec& spec, const char* name) {
        if (spec.kind == FieldSpec::Kind::gaussian) {
            if (static_cast<int>(spec.center.size()) != grid.ndim())
                throw InvalidInputError(std::string(name) +
                                        ": gaussian center needs one value per grid axis");
            if (!(spec.width > 0.0))
                throw InvalidInputError(std::string(name) + ": gaussian width must be positive");
        }
    };
    check_spec(c.u0, "u0");
    check_spec(c.v0, "v0");
    check_spec(c.f0, "f");
    auto check_nonneg = [&](const FieldSpec& spec, const char* name) {
        if (spec.kind == FieldSpec::Kind::constant && spec.value < 0.0)
            throw InvalidInputError(std::string(name) + " must be nonnegative");
        if (spec.kind == FieldSpec::Kind::gaussian && (spec.amplitude < 0.0 || spec.offset < 0.0))
            throw InvalidInputError(std::string(name) + " must be nonnegative");
    };
    check_nonneg(c.u0, "u0");
    check_nonneg(c.v0, "v0");
}

std::string format_config(const RunConfig& c) {
    std::ostringstream out;
    auto join = [](const auto& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += " ";
            if constexpr (std::is_same_v<std::decay_t<decltype(v[0])>, int>)
                s += std::to_string(v[i]);
            else
                s += fmt(v[i]);
        }
        return s;
    };

    out << "[grid]\n";
    out << "dims = " << join(c.dims) << "\n";
    out << "extent = " << join(c.extents) << "\n";
    if (c.has_control_box) {
        out << "control_lo = " << join(c.control_lo) << "\n";
        out << "control_hi = " << join(c.control_hi) << "\n";
    }
    out << "\n[time]\n";
    out << "horizon = " << fmt(c.horizon) << "\n";
    out << "steps = " << c.steps << "\n";
    out << "\n[physics]\n";
    out << "eps = " << fmt(c.eps) << "\n";
    out << "flux = " << (c.flux == FluxScheme::central ? "central" : "upwind") << "\n";
    out << "\n[initial]\n";
    out << "u0 = " << format_field_spec(c.u0) << "\n";
    out << "v0 = " << format_field_spec(c.v0) << "\n";
    out << "f = " << format_field_spec(c.f0) << "\n";
    out << "\n[weights]\n";
    out << "alpha_u = " << fmt(c.weights.alpha_u) << "\n";
    out << "alpha_v = " << fmt(c.weights.alpha_v) << "\n";
    out << "alpha_f = " << fmt(c.weights.alpha_f) << "\n";
    out << "\n[box]\n";
    out << "f_min = " << fmt(c.box.lo) << "\n";
    out << "f_max = " << fmt(c.box.hi) << "\n";
    out << "\n[solver]\n";
    out << "tol = " << fmt(c.helmholtz_tol) << "\n";
    out << "max_iter = " << c.helmholtz_max_iter << "\n";
    out << "diagonal_precondition = " << (c.diagonal_precondition ? "true" : "false") << "\n";
    out << "\n[optimizer]\n";
    out << "method = "
        << (c.method == OptimizerMethod::projected_gradient ? "projected_gradient" : "fixed_point")
        << "\n";
    out << "tol = " << fmt(c.opt_tol) << "\n";
    out << "max_iter = " << c.opt_max_iter << "\n";
    out << "armijo_c1 = " << fmt(c.armijo_c1) << "\n";
    out << "backtrack = " << fmt(c.backtrack) << "\n";
    out << "max_backtracks = " << c.max_backtracks << "\n";
    out << "initial_step = " << fmt(c.initial_step) << "\n";
    out << "relaxation = " << fmt(c.relaxation) << "\n";
    out << "\n[targets]\n";
    switch (c.targets.kind) {
        case TargetSpec::Kind::constant:
            out << "mode = constant\n";
            out << "u = " << fmt(c.targets.u_value) << "\n";
            out << "v = " << fmt(c.targets.v_value) << "\n";
            break;
        case TargetSpec::Kind::file:
            out << "mode = file\n";
            out << "u_file = " << c.targets.u_path << "\n";
            out << "v_file = " << c.targets.v_path << "\n";
            break;
        case TargetSpec::Kind::uncontrolled:
            out << "mode = uncontrolled\n";
            break;
    }
    out << "\n[output]\n";
    out << "directory = " << c.output_dir << "\n";
    out << "snapshot_stride = " << c.snapshot_stride << "\n";
    out << "\n[sweep]\n";
    out << "eps_list = " << join(c.eps_list) << "\n";
    return out.str();
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing", 0);
    out << format_config(config);
    if (!out) throw ConfigError("failed writing config to '" + path + "'", 0);
}

Grid make_grid(const RunConfig& c) {
    Grid grid(c.dims, c.extents);
    if (c.has_control_box)
        grid.set_control_box(c.control_lo, c.control_hi);
    else
        grid.set_control_everywhere();
    return grid;
}

TimeGrid make_time_grid(const RunConfig& c) { return TimeGrid(c.horizon, c.steps); }

SchemeOptions make_scheme_options(const RunConfig& c) {
    SchemeOptions opts;
    opts.flux = c.flux;
    opts.helmholtz_tol = c.helmholtz_tol;
    opts.helmholtz_max_iter = c.helmholtz_max_iter;
    opts.diagonal_precondition = c.diagonal_precondition;
    return opts;
}

OptimizeOptions make_optimize_options(const RunConfig& c) {
    OptimizeOptions opts;
    opts.tol = c.opt_tol;
    opts.max_iter = c.opt_max_iter;
    opts.armijo_c1 = c.armijo_c1;
    opts.backtrack = c.backtrack;
    opts.max_backtracks = c.max_backtracks;
    opts.initial_step = c.initial_step;
    opts.relaxation = c.relaxation;
    opts.scheme = make_scheme_options(c);
    return opts;
}

Control make_control(const RunConfig& config, const Grid& grid, const TimeGrid& tg) {
    ScalarField profile = materialize_field(config.f0, grid);
    Control f(grid, tg);
    for (auto& node : f.f) node = profile;
    f.restrict_to_mask();
    return f;
}

ScalarField materialize_field(const FieldSpec& spec, const Grid& grid) {
    switch (spec.kind) {
        case FieldSpec::Kind::constant: {
            ScalarField field(grid, spec.value);
            return field;
        }
        case FieldSpec::Kind::gaussian: {
            if (static_cast<int>(spec.center.size()) != grid.ndim())
                throw InvalidInputError("gaussian center needs one value per grid axis");
            if (!(spec.width > 0.0))
                throw InvalidInputError("gaussian width must be positive");
            ScalarField field(grid);
            const double inv2w2 = 1.0 / (2.0 * spec.width * spec.width);
            for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
                double r2 = 0.0;
                for (int ax = 0; ax < grid.ndim(); ++ax) {
                    const double d = grid.center(c, ax) - spec.center[static_cast<std::size_t>(ax)];
                    r2 += d * d;
                }
                field[c] = spec.amplitude * std::exp(-r2 * inv2w2) + spec.offset;
            }
            return field;
        }
        case FieldSpec::Kind::file: {
            Snapshot snap = read_snapshot(spec.path);
            if (snap.dims != grid.dims())
                throw InvalidInputError("field file '" + spec.path +
                                        "' grid does not match the configured grid");
            ScalarField field(grid);
            for (std::int64_t c = 0; c < grid.cell_count(); ++c) field[c] = snap.values[c];
            return field;
        }
    }
    throw InvalidInputError("unreachable field spec kind");
}

}  // namespace chemoctrl
