#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rodnet {

struct Material {
    std::string name;
    double E = 0.0;    ///< Young's modulus (Pa)
    double rho = 0.0;  ///< mass density (kg/m^3)
};

/// Cross-section properties. Sections built from a rectangle keep the
/// originating width/thickness so serialization can reproduce the input.
struct Section {
    std::string name;
    double A = 0.0;  ///< area (m^2)
    double I = 0.0;  ///< second moment of area (m^4)

    struct Rect {
        double w = 0.0;
        double t = 0.0;
    };
    std::optional<Rect> rect;
};

struct Node {
    std::string name;
    double x = 0.0;
    double y = 0.0;
};

/// A user-declared beam; the assembly stage splits it into `subdivisions`
/// equal-length rod elements.
struct Beam {
    std::string name;
    std::string node_a;
    std::string node_b;
    std::string material;
    std::string section;
    int subdivisions = 1;
};

enum class Dof { Ux = 0, Uy = 1, Rz = 2 };

struct Constraint {
    std::string node;
    std::array<bool, 3> fixed{false, false, false};  ///< indexed by Dof

    bool any() const { return fixed[0] || fixed[1] || fixed[2]; }
    bool all() const { return fixed[0] && fixed[1] && fixed[2]; }
};

struct Load {
    std::string node;
    double fx = 0.0;  ///< N
    double fy = 0.0;  ///< N
    double mz = 0.0;  ///< N m
};

enum class AnalysisKind { LinearStatic, Buckling, Modal, NonlinearStatic };

struct AnalysisSpec {
    AnalysisKind kind = AnalysisKind::LinearStatic;
    // Modal parameters.
    int modal_modes = 3;
    int modal_order = 1;
    // Nonlinear-static parameters.
    int nonlinear_steps = 10;
    double nonlinear_tolerance = 1e-10;
    int nonlinear_max_iterations = 50;
};

/// One message from validate_model. `location` names the offending entity
/// ("beam b1", "material si").
struct ModelDiagnostic {
    std::string location;
    std::string message;
};

/// The full structural model. Immutable by convention once validated; all
/// lookups are by name against the declaration-ordered collections.
struct Model {
    std::vector<Material> materials;
    std::vector<Section> sections;
    std::vector<Node> nodes;
    std::vector<Beam> beams;
    std::vector<Constraint> constraints;
    std::vector<Load> loads;
    AnalysisSpec analysis;

    const Material* find_material(const std::string& name) const;
    const Section* find_section(const std::string& name) const;
    const Node* find_node(const std::string& name) const;
    int node_index(const std::string& name) const;  ///< -1 when absent
};

/// Builds a rectangular section: A = w t, I = w t^3 / 12.
/// Throws std::invalid_argument on non-positive dimensions.
Section rect_section(const std::string& name, double w, double t);

/// Returns every defect found (dangling references, duplicate names,
/// zero-length beams, missing constraints, non-positive properties, ...).
/// An empty list means the model is safe for every downstream stage.
std::vector<ModelDiagnostic> validate_model(const Model& model);

} // namespace rodnet
