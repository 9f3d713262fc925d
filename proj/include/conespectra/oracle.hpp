#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "conespectra/spectrum.hpp"

namespace conespectra {

enum class ShapeKind { circle, icosphere, football };

struct ShapeTag {
    ShapeKind kind = ShapeKind::circle;
    double circumference = 0.0;  // circle
    int level = 0;               // icosphere / football
    int q = 1;                   // football
};

struct TriMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;
};

// ASCII dump: `v x y z` and `t i j k` lines.
void write_mesh(const TriMesh& mesh, std::ostream& out);

// Discrete stand-in for the cross-section Laplacian: generalized pencil
// stiffness * x = lambda * mass * x with lumped (diagonal) mass.
struct DiscreteLaplacian {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd mass;
    ShapeTag shape;
    TriMesh mesh;  // empty for the circle

    int size() const { return static_cast<int>(mass.size()); }
};

// Periodic second-difference Laplacian on a circle of length L, N nodes.
DiscreteLaplacian build_circle(int N, double L);

// Cotangent-weight Laplacian on a subdivided icosahedron (q = 1) or on a
// q-fold rotationally symmetric sphere mesh folded to the quotient (q > 1).
DiscreteLaplacian build_icosphere(int level, int q = 1);

// Smallest `count` eigenvalues of the pencil, ascending, residual-checked
// to 1e-10. ConvergenceError (with the achieved residual) past the
// iteration cap.
std::vector<double> lowest_eigenvalues(const DiscreteLaplacian& lap, int count);

struct ClusterMatch {
    double analytic = 0.0;
    long long multiplicity = 0;
    int numeric_count = 0;
    double rel_error = 0.0;
    bool pass = false;
};

struct MatchReport {
    std::vector<ClusterMatch> clusters;
    double rel_tol = 0.0;
    bool pass = false;
};

// Greedy clusterwise matching of an ascending numeric spectrum against the
// analytic entries; clusters are split at relative gaps above 0.5*rel_tol.
MatchReport spectrum_match(const Spectrum& analytic, const std::vector<double>& numeric,
                           double rel_tol);

std::string match_report_json(const MatchReport& report);

}  // namespace conespectra
