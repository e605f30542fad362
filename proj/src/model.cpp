#include "rodnet/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace rodnet {

namespace {

template <typename T>
const T* find_by_name(const std::vector<T>& items, const std::string& name) {
    for (const T& item : items) {
        if (item.name == name) {
            return &item;
        }
    }
    return nullptr;
}

template <typename T>
void check_unique_names(const std::vector<T>& items, const char* kind,
                        std::vector<ModelDiagnostic>& out) {
    std::set<std::string> seen;
    for (const T& item : items) {
        if (!seen.insert(item.name).second) {
            out.push_back({std::string(kind) + " " + item.name,
                           std::string("duplicate ") + kind + " name '" + item.name + "'"});
        }
    }
}

} // namespace

const Material* Model::find_material(const std::string& name) const {
    return find_by_name(materials, name);
}

const Section* Model::find_section(const std::string& name) const {
    return find_by_name(sections, name);
}

const Node* Model::find_node(const std::string& name) const {
    return find_by_name(nodes, name);
}

int Model::node_index(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Section rect_section(const std::string& name, double w, double t) {
    if (!(w > 0.0) || !(t > 0.0)) {
        throw std::invalid_argument("rect_section: dimensions must be positive (w=" +
                                    std::to_string(w) + ", t=" + std::to_string(t) + ")");
    }
    Section s;
    s.name = name;
    s.A = w * t;
    s.I = w * t * t * t / 12.0;
    s.rect = Section::Rect{w, t};
    return s;
}

std::vector<ModelDiagnostic> validate_model(const Model& model) {
    std::vector<ModelDiagnostic> out;

    check_unique_names(model.materials, "material", out);
    check_unique_names(model.sections, "section", out);
    check_unique_names(model.nodes, "node", out);
    check_unique_names(model.beams, "beam", out);

    for (const Material& m : model.materials) {
        if (!(m.E > 0.0)) {
            out.push_back({"material " + m.name, "Young's modulus must be positive"});
        }
        if (!(m.rho > 0.0)) {
            out.push_back({"material " + m.name, "density must be positive"});
        }
    }
    for (const Section& s : model.sections) {
        if (!(s.A > 0.0)) {
            out.push_back({"section " + s.name, "area must be positive"});
        }
        if (!(s.I > 0.0)) {
            out.push_back({"section " + s.name, "second moment of area must be positive"});
        }
    }
    for (const Node& n : model.nodes) {
        if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
            out.push_back({"node " + n.name, "coordinates must be finite"});
        }
    }

    for (const Beam& b : model.beams) {
        const std::string loc = "beam " + b.name;
        const Node* a = model.find_node(b.node_a);
        const Node* c = model.find_node(b.node_b);
        if (a == nullptr) {
            out.push_back({loc, "undefined node '" + b.node_a + "'"});
        }
        if (c == nullptr) {
            out.push_back({loc, "undefined node '" + b.node_b + "'"});
        }
        if (model.find_material(b.material) == nullptr) {
            out.push_back({loc, "undefined material '" + b.material + "'"});
        }
        if (model.find_section(b.section) == nullptr) {
            out.push_back({loc, "undefined section '" + b.section + "'"});
        }
        if (b.subdivisions < 1) {
            out.push_back({loc, "subdivisions must be at least 1"});
        }
        if (a != nullptr && c != nullptr) {
            if (b.node_a == b.node_b) {
                out.push_back({loc, "beam connects node '" + b.node_a + "' to itself"});
            } else if (std::hypot(c->x - a->x, c->y - a->y) <= 0.0) {
                out.push_back({loc, "zero-length beam (endpoints coincide)"});
            }
        }
    }

    for (const Constraint& c : model.constraints) {
        if (model.find_node(c.node) == nullptr) {
            out.push_back({"fix " + c.node, "undefined node '" + c.node + "'"});
        }
        if (!c.any()) {
            out.push_back({"fix " + c.node, "constraint fixes no degrees of freedom"});
        }
    }
    for (const Load& l : model.loads) {
        if (model.find_node(l.node) == nullptr) {
            out.push_back({"force " + l.node, "undefined node '" + l.node + "'"});
        }
        if (!std::isfinite(l.fx) || !std::isfinite(l.fy) || !std::isfinite(l.mz)) {
            out.push_back({"force " + l.node, "load components must be finite"});
        }
    }

    const bool needs_support = model.analysis.kind == AnalysisKind::LinearStatic ||
                               model.analysis.kind == AnalysisKind::Buckling ||
                               model.analysis.kind == AnalysisKind::Modal;
    if (needs_support && model.constraints.empty()) {
        out.push_back({"model", "analysis requires at least one constraint"});
    }

    if (model.analysis.kind == AnalysisKind::Modal) {
        if (model.analysis.modal_modes < 1) {
            out.push_back({"analysis", "modal mode count must be at least 1"});
        }
        if (model.analysis.modal_order < 0) {
            out.push_back({"analysis", "modal truncation order must be non-negative"});
        }
    }
    if (model.analysis.kind == AnalysisKind::NonlinearStatic) {
        if (model.analysis.nonlinear_steps < 1) {
            out.push_back({"analysis", "nonlinear step count must be at least 1"});
        }
        if (!(model.analysis.nonlinear_tolerance > 0.0)) {
            out.push_back({"analysis", "nonlinear tolerance must be positive"});
        }
        if (model.analysis.nonlinear_max_iterations < 1) {
            out.push_back({"analysis", "nonlinear iteration limit must be at least 1"});
        }
    }

    return out;
}

} // namespace rodnet
