#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rodnet/errors.hpp"
#include "rodnet/model.hpp"
#include "rodnet/netlist.hpp"
#include "rodnet/oracle.hpp"
#include "rodnet/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnreadable = 3;
constexpr int kExitSolver = 4;
constexpr int kExitNoOracle = 5;

constexpr double kTau = 6.28318530717958647692;  // 2 pi

/// 17 significant digits: enough for exact double round-trips, so result
/// files are byte-deterministic and lossless.
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        return std::nullopt;
    }
    return ss.str();
}

/// Parses `path`, printing one "file:line:col message" diagnostic per line
/// on failure. Returns the model or an exit code.
std::optional<rodnet::Model> load_model(const std::string& path, int& exit_code) {
    const std::optional<std::string> text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        exit_code = kExitUnreadable;
        return std::nullopt;
    }
    rodnet::ParseResult parsed = rodnet::parse_model(*text);
    if (!parsed.ok()) {
        for (const rodnet::ParseDiagnostic& d : parsed.diagnostics) {
            std::cerr << path << ":" << d.span.line << ":" << d.span.col_begin << " "
                      << d.message << "\n";
        }
        exit_code = kExitUsage;
        return std::nullopt;
    }
    return std::move(*parsed.model);
}

struct RunOverrides {
    std::string analysis;
    int elements = 0;   // 0 = keep file values
    int order = -1;     // -1 = keep
    int steps = 0;      // 0 = keep
    double tol = 0.0;   // 0 = keep
};

void apply_overrides(rodnet::Model& model, const RunOverrides& o) {
    if (!o.analysis.empty()) {
        if (o.analysis == "static") {
            model.analysis.kind = rodnet::AnalysisKind::LinearStatic;
        } else if (o.analysis == "buckling") {
            model.analysis.kind = rodnet::AnalysisKind::Buckling;
        } else if (o.analysis == "modal") {
            model.analysis.kind = rodnet::AnalysisKind::Modal;
        } else {
            model.analysis.kind = rodnet::AnalysisKind::NonlinearStatic;
        }
    }
    if (o.elements > 0) {
        for (rodnet::Beam& b : model.beams) {
            b.subdivisions = o.elements;
        }
    }
    if (o.order >= 0) {
        model.analysis.modal_order = o.order;
    }
    if (o.steps > 0) {
        model.analysis.nonlinear_steps = o.steps;
    }
    if (o.tol > 0.0) {
        model.analysis.nonlinear_tolerance = o.tol;
    }
}

bool write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.flush();
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    return true;
}

std::string static_csv(const rodnet::StaticResult& result) {
    std::string csv = "node,ux,uy,rz\n";
    for (const rodnet::NodeState& n : result.displacements) {
        csv += n.node + "," + num(n.ux) + "," + num(n.uy) + "," + num(n.rz) + "\n";
    }
    csv += "reaction_node,fx,fy,mz\n";
    for (const rodnet::NodeForces& r : result.reactions) {
        csv += r.node + "," + num(r.fx) + "," + num(r.fy) + "," + num(r.mz) + "\n";
    }
    return csv;
}

std::string buckling_csv(const rodnet::BucklingResult& result) {
    std::string csv = "mode,load_factor,critical_load\n";
    for (std::size_t i = 0; i < result.load_factors.size(); ++i) {
        csv += std::to_string(i + 1) + "," + num(result.load_factors[i]) + "," +
               num(result.load_factors[i] * result.reference_load) + "\n";
    }
    return csv;
}

std::string modal_csv(const rodnet::ModalResult& result) {
    std::string csv = "mode,omega_rad_s,freq_hz\n";
    for (std::size_t i = 0; i < result.omegas.size(); ++i) {
        csv += std::to_string(i + 1) + "," + num(result.omegas[i]) + "," +
               num(result.omegas[i] / kTau) + "\n";
    }
    return csv;
}

std::string path_csv(const rodnet::EquilibriumPath& path) {
    std::string csv = "load_factor,node,ux,uy,rz\n";
    for (const rodnet::PathPoint& p : path.points) {
        for (const rodnet::NodeState& n : p.configuration) {
            csv += num(p.load_factor) + "," + n.node + "," + num(n.ux) + "," + num(n.uy) +
                   "," + num(n.rz) + "\n";
        }
    }
    return csv;
}

int cmd_validate(const std::string& path) {
    int exit_code = kExitOk;
    if (!load_model(path, exit_code)) {
        return exit_code;
    }
    std::cout << "OK\n";
    return kExitOk;
}

int cmd_run(const std::string& path, const std::string& out_dir, const RunOverrides& o) {
    int exit_code = kExitOk;
    std::optional<rodnet::Model> model = load_model(path, exit_code);
    if (!model) {
        return exit_code;
    }
    apply_overrides(*model, o);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::filesystem::path results = std::filesystem::path(out_dir) / "results.csv";

    try {
        const rodnet::ExecutionMode mode = rodnet::ExecutionMode::Parallel;
        switch (model->analysis.kind) {
            case rodnet::AnalysisKind::LinearStatic: {
                if (!write_text(results, static_csv(rodnet::solve_linear_static(*model, mode)))) {
                    return kExitUnreadable;
                }
                break;
            }
            case rodnet::AnalysisKind::Buckling: {
                if (!write_text(results, buckling_csv(rodnet::solve_buckling(*model, 1, mode)))) {
                    return kExitUnreadable;
                }
                break;
            }
            case rodnet::AnalysisKind::Modal: {
                const rodnet::ModalResult result = rodnet::solve_modal(
                    *model, model->analysis.modal_modes, model->analysis.modal_order, mode);
                if (!write_text(results, modal_csv(result))) {
                    return kExitUnreadable;
                }
                break;
            }
            case rodnet::AnalysisKind::NonlinearStatic: {
                const rodnet::EquilibriumPath path = rodnet::solve_nonlinear_static(
                    *model, model->analysis.nonlinear_steps, model->analysis.nonlinear_tolerance,
                    model->analysis.nonlinear_max_iterations, mode);
                // The accepted part of the path is written even on failure.
                if (!write_text(results, path_csv(path))) {
                    return kExitUnreadable;
                }
                if (path.failed) {
                    std::cerr << "error: " << path.failure << "\n";
                    return kExitSolver;
                }
                break;
            }
        }
    } catch (const rodnet::SolveError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}

/// Which classical closed form applies to a model: a single prismatic beam
/// clamped at one end and free at the other (cantilever) or clamped at both
/// ends with the axial DOF of one end released for loading (bridge).
struct StudyTopology {
    bool is_cantilever = false;
    bool is_bridge = false;
    std::string root;  ///< fully clamped node
    std::string tip;   ///< the other end
    double E = 0.0, A = 0.0, I = 0.0, rho = 0.0, L = 0.0;
};

std::array<bool, 3> aggregated_fix(const rodnet::Model& model, const std::string& node) {
    std::array<bool, 3> fixed{false, false, false};
    for (const rodnet::Constraint& c : model.constraints) {
        if (c.node == node) {
            for (int d = 0; d < 3; ++d) {
                fixed[static_cast<std::size_t>(d)] =
                    fixed[static_cast<std::size_t>(d)] || c.fixed[static_cast<std::size_t>(d)];
            }
        }
    }
    return fixed;
}

std::optional<StudyTopology> detect_topology(const rodnet::Model& model) {
    if (model.beams.size() != 1) {
        return std::nullopt;
    }
    const rodnet::Beam& beam = model.beams.front();
    const rodnet::Node* a = model.find_node(beam.node_a);
    const rodnet::Node* b = model.find_node(beam.node_b);
    const rodnet::Material* mat = model.find_material(beam.material);
    const rodnet::Section* sec = model.find_section(beam.section);

    StudyTopology topo;
    topo.E = mat->E;
    topo.rho = mat->rho;
    topo.A = sec->A;
    topo.I = sec->I;
    topo.L = std::hypot(b->x - a->x, b->y - a->y);

    const std::array<bool, 3> fix_a = aggregated_fix(model, beam.node_a);
    const std::array<bool, 3> fix_b = aggregated_fix(model, beam.node_b);
    const auto all = [](const std::array<bool, 3>& f) { return f[0] && f[1] && f[2]; };
    const auto none = [](const std::array<bool, 3>& f) { return !f[0] && !f[1] && !f[2]; };
    const auto transverse = [](const std::array<bool, 3>& f) { return !f[0] && f[1] && f[2]; };

    if (all(fix_a) && none(fix_b)) {
        topo.is_cantilever = true;
        topo.root = beam.node_a;
        topo.tip = beam.node_b;
    } else if (all(fix_b) && none(fix_a)) {
        topo.is_cantilever = true;
        topo.root = beam.node_b;
        topo.tip = beam.node_a;
    } else if (all(fix_a) && transverse(fix_b)) {
        topo.is_bridge = true;
        topo.root = beam.node_a;
        topo.tip = beam.node_b;
    } else if (all(fix_b) && transverse(fix_a)) {
        topo.is_bridge = true;
        topo.root = beam.node_b;
        topo.tip = beam.node_a;
    } else {
        return std::nullopt;
    }
    return topo;
}

int cmd_study(const std::string& path, const std::string& out_dir,
              const std::vector<int>& counts, const std::string& quantity) {
    for (int n : counts) {
        if (n < 1) {
            std::cerr << "error: --elements entries must be >= 1 (got " << n << ")\n";
            return kExitUsage;
        }
    }
    int exit_code = kExitOk;
    std::optional<rodnet::Model> model = load_model(path, exit_code);
    if (!model) {
        return exit_code;
    }

    const std::optional<StudyTopology> topo = detect_topology(*model);
    if (!topo) {
        std::cerr << "error: no closed-form reference for this model's topology\n";
        return kExitNoOracle;
    }

    double analytical = 0.0;
    const rodnet::Load* tip_load = nullptr;
    for (const rodnet::Load& l : model->loads) {
        if (l.node == topo->tip) {
            tip_load = &l;
        }
    }
    if (quantity == "buckling") {
        analytical = rodnet::oracle::euler_buckling(
            topo->E, topo->I, topo->L,
            topo->is_bridge ? rodnet::oracle::BucklingCase::ClampedClamped
                            : rodnet::oracle::BucklingCase::Cantilever);
    } else if (quantity == "static-tip") {
        if (!topo->is_cantilever || tip_load == nullptr || tip_load->fy == 0.0) {
            std::cerr << "error: static-tip needs a cantilever with a transverse tip load\n";
            return kExitNoOracle;
        }
        analytical = rodnet::oracle::cantilever_tip_deflection(tip_load->fy, topo->E,
                                                               topo->I, topo->L);
    } else {  // modal-1
        if (!topo->is_cantilever) {
            std::cerr << "error: modal-1 needs a cantilever\n";
            return kExitNoOracle;
        }
        analytical = rodnet::oracle::cantilever_frequencies(topo->E, topo->I, topo->rho,
                                                            topo->A, topo->L, 1)
                         .front();
    }

    std::string csv = "elements,model_value,analytical_value,rel_error_percent\n";
    try {
        const rodnet::ExecutionMode mode = rodnet::ExecutionMode::Parallel;
        for (int n : counts) {
            rodnet::Model variant = *model;
            for (rodnet::Beam& b : variant.beams) {
                b.subdivisions = n;
            }
            double value = 0.0;
            if (quantity == "buckling") {
                const rodnet::BucklingResult result = rodnet::solve_buckling(variant, 1, mode);
                value = result.load_factors.front() * result.reference_load;
            } else if (quantity == "static-tip") {
                const rodnet::StaticResult result = rodnet::solve_linear_static(variant, mode);
                for (const rodnet::NodeState& s : result.displacements) {
                    if (s.node == topo->tip) {
                        value = s.uy;
                    }
                }
            } else {
                value = rodnet::solve_modal(variant, 1, variant.analysis.modal_order, mode)
                            .omegas.front();
            }
            const double error = std::abs(value - analytical) / std::abs(analytical) * 100.0;
            csv += std::to_string(n) + "," + num(value) + "," + num(analytical) + "," +
                   num(error) + "\n";
        }
    } catch (const rodnet::SolveError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitSolver;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!write_text(std::filesystem::path(out_dir) / "study.csv", csv)) {
        return kExitUnreadable;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rod-network structural solver for slender planar frames"};
    app.require_subcommand(1);

    std::string path;
    std::string out_dir = ".";
    RunOverrides overrides;
    std::vector<int> counts;
    std::string quantity;

    CLI::App* validate = app.add_subcommand("validate", "Check a model file");
    validate->add_option("file", path, "model file")->required();

    CLI::App* run = app.add_subcommand("run", "Run the file's analysis, write results.csv");
    run->add_option("file", path, "model file")->required();
    run->add_option("--out", out_dir, "output directory (default: .)");
    run->add_option("--analysis", overrides.analysis, "override the analysis kind")
        ->check(CLI::IsMember({"static", "buckling", "modal", "nonlinear"}));
    run->add_option("--elements", overrides.elements, "override subdivisions of every beam")
        ->check(CLI::PositiveNumber);
    run->add_option("--order", overrides.order, "override the modal series order")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--steps", overrides.steps, "override nonlinear load steps")
        ->check(CLI::PositiveNumber);
    run->add_option("--tol", overrides.tol, "override the nonlinear tolerance")
        ->check(CLI::PositiveNumber);

    CLI::App* study = app.add_subcommand(
        "study", "Convergence study against the closed-form reference, write study.csv");
    study->add_option("file", path, "model file")->required();
    study->add_option("--out", out_dir, "output directory (default: .)");
    study->add_option("--elements", counts, "comma-separated subdivision counts")
        ->required()
        ->delimiter(',');
    study->add_option("--quantity", quantity, "studied quantity")
        ->required()
        ->check(CLI::IsMember({"buckling", "static-tip", "modal-1"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (validate->parsed()) {
        return cmd_validate(path);
    }
    if (run->parsed()) {
        return cmd_run(path, out_dir, overrides);
    }
    return cmd_study(path, out_dir, counts, quantity);
}
