#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chemoctrl/forward.hpp"
#include "chemoctrl/grid.hpp"
#include "chemoctrl/objective.hpp"
#include "chemoctrl/optimizer.hpp"

namespace chemoctrl {

// How a scalar field is specified in a run file. Gaussian centers carry one
// entry per grid axis; the count is checked against the grid at load time.
struct FieldSpec {
    enum class Kind { constant, gaussian, file };
    Kind kind = Kind::constant;
    double value = 0.0;                // constant
    std::vector<double> center;        // gaussian
    double width = 0.1;
    double amplitude = 1.0;
    double offset = 0.0;
    std::string path;                  // file
};

struct TargetSpec {
    enum class Kind { constant, file, uncontrolled };
    Kind kind = Kind::constant;
    double u_value = 0.0;              // constant
    double v_value = 0.0;
    std::string u_path;                // file (static snapshot held fixed in time)
    std::string v_path;
};

enum class OptimizerMethod { projected_gradient, fixed_point };

// Fully resolved run description. load_config fills every field, applying
// documented defaults for anything the file omits, and validates the result
// against the same rules the library enforces.
struct RunConfig {
    // grid
    std::vector<std::int64_t> dims;
    std::vector<double> extents;
    bool has_control_box = false;
    std::vector<double> control_lo;
    std::vector<double> control_hi;

    // time
    double horizon = 1.0;
    int steps = 100;

    // physics
    double eps = 0.0;
    FluxScheme flux = FluxScheme::central;

    // initial conditions and the (time-constant) control profile used by
    // simulate runs and as the optimizer's starting guess
    FieldSpec u0{FieldSpec::Kind::constant, 1.0, {}, 0.1, 1.0, 0.0, {}};
    FieldSpec v0{FieldSpec::Kind::constant, 1.0, {}, 0.1, 1.0, 0.0, {}};
    FieldSpec f0{FieldSpec::Kind::constant, 0.0, {}, 0.1, 1.0, 0.0, {}};

    ObjectiveWeights weights;
    AdmissibleBox box;

    // solver
    double helmholtz_tol = 1e-10;
    int helmholtz_max_iter = 0;        // 0 = resolution-based default
    bool diagonal_precondition = false;

    // optimizer
    OptimizerMethod method = OptimizerMethod::projected_gradient;
    double opt_tol = 1e-6;
    int opt_max_iter = 200;
    double armijo_c1 = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    double initial_step = 1.0;
    double relaxation = 0.5;

    TargetSpec targets;

    // output
    std::string output_dir = "runs";
    int snapshot_stride = 10;

    // sweep-eps
    std::vector<double> eps_list{1e-2, 1e-3, 1e-4};
};

// Parses and validates a run file. Unknown sections or keys, duplicate keys,
// and malformed values are errors carrying the offending line number;
// validation failures name the violated rule.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in);

// Writes the fully resolved form (every key present, canonical order) so that
// load(save(c)) reproduces c exactly.
void save_config(const RunConfig& config, const std::string& path);
std::string format_config(const RunConfig& config);

// Checks everything that does not require touching the filesystem. Called by
// load_config; exposed so hand-built configs get the same treatment.
void validate_config(const RunConfig& config);

Grid make_grid(const RunConfig& config);
TimeGrid make_time_grid(const RunConfig& config);
SchemeOptions make_scheme_options(const RunConfig& config);
OptimizeOptions make_optimize_options(const RunConfig& config);

// Evaluates a field spec on the grid; file specs read a snapshot and require
// matching dims.
ScalarField materialize_field(const FieldSpec& spec, const Grid& grid);

// The time-constant control profile from the [initial] f key, restricted to
// the control region.
Control make_control(const RunConfig& config, const Grid& grid, const TimeGrid& tg);

}  // namespace chemoctrl
