#include "conespectra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <nlohmann/json.hpp>

#include "conespectra/errors.hpp"

namespace conespectra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxLevel = 7;

using Triplets = std::vector<Eigen::Triplet<double>>;

void cotan_assemble(const TriMesh& mesh, Triplets& trip, Eigen::VectorXd& mass) {
    mass.setZero();
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector3d& a = mesh.vertices[static_cast<size_t>(t[0])];
        const Eigen::Vector3d& b = mesh.vertices[static_cast<size_t>(t[1])];
        const Eigen::Vector3d& c = mesh.vertices[static_cast<size_t>(t[2])];
        const double area = 0.5 * (b - a).cross(c - a).norm();
        for (int corner = 0; corner < 3; ++corner) {
            const int i = t[corner];
            const int j = t[(corner + 1) % 3];
            const int k = t[(corner + 2) % 3];
            const Eigen::Vector3d e1 = mesh.vertices[static_cast<size_t>(j)] -
                                       mesh.vertices[static_cast<size_t>(i)];
            const Eigen::Vector3d e2 = mesh.vertices[static_cast<size_t>(k)] -
                                       mesh.vertices[static_cast<size_t>(i)];
            const double cot = e1.dot(e2) / e1.cross(e2).norm();
            // Opposite edge (j,k) gets half this cotangent.
            const double w = 0.5 * cot;
            trip.emplace_back(j, k, -w);
            trip.emplace_back(k, j, -w);
            trip.emplace_back(j, j, w);
            trip.emplace_back(k, k, w);
            mass(i) += area / 3.0;
        }
    }
}

TriMesh icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    const double verts[12][3] = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (const auto& v : verts)
        m.vertices.push_back(Eigen::Vector3d(v[0], v[1], v[2]).normalized());
    const int faces[20][3] = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (const auto& f : faces) m.triangles.push_back({f[0], f[1], f[2]});
    return m;
}

TriMesh subdivide_project(const TriMesh& in) {
    TriMesh out;
    out.vertices = in.vertices;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(out.vertices.size());
        out.vertices.push_back((out.vertices[static_cast<size_t>(a)] +
                                out.vertices[static_cast<size_t>(b)])
                                   .normalized());
        midpoint.emplace(key, id);
        return id;
    };
    for (const auto& t : in.triangles) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({t[1], bc, ab});
        out.triangles.push_back({t[2], ca, bc});
        out.triangles.push_back({ab, bc, ca});
    }
    return out;
}

// Latitude-longitude sphere mesh whose azimuthal vertex count is a multiple
// of q, so rotation by 2pi/q is an exact mesh symmetry.
TriMesh latlong_sphere(int rings, int naz) {
    TriMesh m;
    m.vertices.emplace_back(0, 0, 1);   // id 0: north pole
    m.vertices.emplace_back(0, 0, -1);  // id 1: south pole
    auto ring_vertex = [&](int j, int a) { return 2 + (j - 1) * naz + (a % naz); };
    for (int j = 1; j < rings; ++j) {
        const double theta = std::numbers::pi * j / rings;
        for (int a = 0; a < naz; ++a) {
            const double phi = kTwoPi * a / naz;
            m.vertices.emplace_back(std::sin(theta) * std::cos(phi),
                                    std::sin(theta) * std::sin(phi), std::cos(theta));
        }
    }
    for (int a = 0; a < naz; ++a) {
        m.triangles.push_back({0, ring_vertex(1, a), ring_vertex(1, a + 1)});
        m.triangles.push_back({1, ring_vertex(rings - 1, a + 1), ring_vertex(rings - 1, a)});
    }
    for (int j = 1; j + 1 < rings; ++j)
        for (int a = 0; a < naz; ++a) {
            const int v00 = ring_vertex(j, a), v01 = ring_vertex(j, a + 1);
            const int v10 = ring_vertex(j + 1, a), v11 = ring_vertex(j + 1, a + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }
    return m;
}

}  // namespace

void write_mesh(const TriMesh& mesh, std::ostream& out) {
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& t : mesh.triangles)
        out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

DiscreteLaplacian build_circle(int N, double L) {
    if (N < 3) throw DomainError("circle discretization needs N >= 3");
    if (!(L > 0.0) || L > kTwoPi)
        throw DomainError("circle circumference must lie in (0, 2pi]");
    const double h = L / N;
    DiscreteLaplacian lap;
    lap.shape = {ShapeKind::circle, L, 0, 1};
    lap.mass = Eigen::VectorXd::Constant(N, h);
    Triplets trip;
    trip.reserve(static_cast<size_t>(3 * N));
    for (int i = 0; i < N; ++i) {
        const int prev = (i + N - 1) % N;
        const int next = (i + 1) % N;
        trip.emplace_back(i, i, 2.0 / h);
        trip.emplace_back(i, prev, -1.0 / h);
        trip.emplace_back(i, next, -1.0 / h);
    }
    lap.stiffness.resize(N, N);
    lap.stiffness.setFromTriplets(trip.begin(), trip.end());
    return lap;
}

DiscreteLaplacian build_icosphere(int level, int q) {
    if (level < 0) throw DomainError("subdivision level must be >= 0");
    if (level > kMaxLevel)
        throw ResourceError("subdivision level capped at " + std::to_string(kMaxLevel));
    if (q < 1) throw DomainError("rotation order q must be >= 1");

    if (q == 1) {
        TriMesh mesh = icosahedron();
        for (int l = 0; l < level; ++l) mesh = subdivide_project(mesh);
        DiscreteLaplacian lap;
        lap.shape = {ShapeKind::icosphere, 0.0, level, 1};
        const int n = static_cast<int>(mesh.vertices.size());
        lap.mass.resize(n);
        Triplets trip;
        cotan_assemble(mesh, trip, lap.mass);
        lap.stiffness.resize(n, n);
        lap.stiffness.setFromTriplets(trip.begin(), trip.end());
        lap.mesh = std::move(mesh);
        return lap;
    }

    // q-fold symmetric lat-long mesh folded onto rotation orbits.
    const int rings = 4 << level;
    const int naz0 = 2 * rings;
    const int naz = q * ((naz0 + q - 1) / q);
    TriMesh mesh = latlong_sphere(rings, naz);
    const int nfull = static_cast<int>(mesh.vertices.size());
    Eigen::VectorXd full_mass(nfull);
    Triplets trip;
    cotan_assemble(mesh, trip, full_mass);

    // Orbit representative: azimuth index modulo naz/q; poles are fixed.
    const int arc = naz / q;
    std::vector<int> rep(static_cast<size_t>(nfull));
    rep[0] = 0;
    rep[1] = 1;
    for (int j = 1; j < rings; ++j)
        for (int a = 0; a < naz; ++a) {
            const int id = 2 + (j - 1) * naz + a;
            rep[static_cast<size_t>(id)] = 2 + (j - 1) * arc + (a % arc);
        }
    const int nq = 2 + (rings - 1) * arc;

    DiscreteLaplacian lap;
    lap.shape = {ShapeKind::football, 0.0, level, q};
    lap.mass = Eigen::VectorXd::Zero(nq);
    for (int i = 0; i < nfull; ++i) lap.mass(rep[static_cast<size_t>(i)]) += full_mass(i) / q;
    Triplets folded;
    folded.reserve(trip.size());
    for (const auto& t : trip)
        folded.emplace_back(rep[static_cast<size_t>(t.row())], rep[static_cast<size_t>(t.col())],
                            t.value() / q);
    lap.stiffness.resize(nq, nq);
    lap.stiffness.setFromTriplets(folded.begin(), folded.end());
    lap.mesh = std::move(mesh);
    return lap;
}

namespace {

// Shift-invert Lanczos in the mass inner product with full
// reorthogonalization; extends the Krylov basis until the requested Ritz
// pairs meet the residual tolerance.
std::vector<double> lanczos_lowest(const DiscreteLaplacian& lap, int count) {
    const int n = lap.size();
    const double sigma = -1.0;
    Eigen::SparseMatrix<double> shifted = lap.stiffness;
    for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma * lap.mass(i);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
    if (factor.info() != Eigen::Success)
        throw ConvergenceError("factorization of the shifted pencil failed", 1.0);

    double knorm = 0.0;
    for (int c = 0; c < lap.stiffness.outerSize(); ++c) {
        double rowsum = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(lap.stiffness, c); it; ++it)
            rowsum += std::abs(it.value());
        knorm = std::max(knorm, rowsum);
    }

    const auto m_dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(lap.mass.cwiseProduct(b));
    };

    std::mt19937_64 rng(0x5ca1ab1eULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_vec = [&] {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
        return v;
    };

    const int cap = std::min(n, std::max(400, 6 * count));
    std::vector<Eigen::VectorXd> q, opq;  // opq[j] = (K - sigma M)^{-1} M q[j]
    Eigen::VectorXd v = random_vec();

    double worst_residual = 1.0;
    while (true) {
        // Grow the Krylov basis up to the next checkpoint.
        const int target = std::min(cap, static_cast<int>(q.size()) + std::max(2 * count + 30, 40));
        while (static_cast<int>(q.size()) < target) {
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& qi : q) v -= m_dot(qi, v) * qi;
            double norm = std::sqrt(m_dot(v, v));
            if (norm < 1e-13) {  // direction exhausted; restart randomly
                v = random_vec();
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& qi : q) v -= m_dot(qi, v) * qi;
                norm = std::sqrt(m_dot(v, v));
            }
            q.push_back(v / norm);
            opq.push_back(factor.solve(lap.mass.cwiseProduct(q.back())));
            v = opq.back();
        }

        // Rayleigh-Ritz on the full projected operator; full
        // reorthogonalization makes it symmetric up to roundoff.
        const int m = static_cast<int>(q.size());
        Eigen::MatrixXd tri(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j) {
                const double t = m_dot(q[static_cast<size_t>(i)], opq[static_cast<size_t>(j)]);
                tri(i, j) = t;
                tri(j, i) = t;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);

        // Largest theta correspond to the smallest pencil eigenvalues.
        std::vector<std::pair<double, int>> ritz;
        for (int i = 0; i < m; ++i) ritz.emplace_back(es.eigenvalues()(i), i);
        std::sort(ritz.rbegin(), ritz.rend());

        std::vector<double> lambdas;
        worst_residual = 0.0;
        bool converged = static_cast<int>(ritz.size()) >= count;
        for (int i = 0; i < count && converged; ++i) {
            const double theta = ritz[static_cast<size_t>(i)].first;
            const double lam = sigma + 1.0 / theta;
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
            for (int j = 0; j < m; ++j)
                x += es.eigenvectors()(j, ritz[static_cast<size_t>(i)].second) *
                     q[static_cast<size_t>(j)];
            x.normalize();
            const double res =
                (lap.stiffness * x - lam * lap.mass.cwiseProduct(x)).norm() / knorm;
            worst_residual = std::max(worst_residual, res);
            if (res > kResidualTol) converged = false;
            lambdas.push_back(lam);
        }
        if (converged) {
            std::sort(lambdas.begin(), lambdas.end());
            // Clamp the kernel mode: it is zero up to roundoff.
            for (double& l : lambdas)
                if (std::abs(l) < kResidualTol * knorm) l = std::max(l, 0.0);
            return lambdas;
        }
        if (m >= cap)
            throw ConvergenceError("Lanczos iteration cap reached (residual " +
                                       std::to_string(worst_residual) + ")",
                                   worst_residual);
    }
}

}  // namespace

std::vector<double> lowest_eigenvalues(const DiscreteLaplacian& lap, int count) {
    if (count < 1) throw DomainError("eigenvalue count must be >= 1");
    if (count > lap.size())
        throw DomainError("requested more eigenvalues than matrix dimension");

    if (lap.size() <= 256) {
        Eigen::MatrixXd k = Eigen::MatrixXd(lap.stiffness);
        Eigen::MatrixXd m = lap.mass.asDiagonal();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m);
        std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + count);
        return out;
    }
    return lanczos_lowest(lap, count);
}

MatchReport spectrum_match(const Spectrum& analytic, const std::vector<double>& numeric,
                           double rel_tol) {
    for (size_t i = 1; i < numeric.size(); ++i)
        if (numeric[i] < numeric[i - 1])
            throw DomainError("numeric spectrum must be ascending");

    MatchReport rep;
    rep.rel_tol = rel_tol;

    // Split the numeric list at relative gaps above 0.5*rel_tol.
    std::vector<std::vector<double>> clusters;
    for (double v : numeric) {
        if (clusters.empty() ||
            v - clusters.back().back() > 0.5 * rel_tol * std::max(1.0, v))
            clusters.emplace_back();
        clusters.back().push_back(v);
    }

    rep.pass = true;
    size_t c = 0;
    for (const auto& entry : analytic.entries) {
        if (c >= clusters.size()) break;
        const auto& cluster = clusters[c];
        const double mean =
            std::accumulate(cluster.begin(), cluster.end(), 0.0) / cluster.size();
        const double lam = entry.eigenvalue.value();
        ClusterMatch cm;
        cm.analytic = lam;
        cm.multiplicity = entry.multiplicity;
        cm.numeric_count = static_cast<int>(cluster.size());
        cm.rel_error = std::abs(mean - lam) / std::max(1.0, std::abs(lam));
        const bool last_cluster = (c + 1 == clusters.size());
        const bool count_ok =
            cm.numeric_count == cm.multiplicity ||
            (last_cluster && cm.numeric_count < cm.multiplicity);  // truncated list
        cm.pass = count_ok && cm.rel_error <= rel_tol;
        rep.clusters.push_back(cm);
        if (!cm.pass) rep.pass = false;
        ++c;
    }
    if (c < clusters.size()) rep.pass = false;  // spurious numeric clusters
    return rep;
}

std::string match_report_json(const MatchReport& report) {
    nlohmann::json j;
    j["rel_tol"] = report.rel_tol;
    j["pass"] = report.pass;
    j["clusters"] = nlohmann::json::array();
    for (const auto& c : report.clusters) {
        j["clusters"].push_back({{"analytic", c.analytic},
                                 {"multiplicity", c.multiplicity},
                                 {"numeric_count", c.numeric_count},
                                 {"rel_error", c.rel_error},
                                 {"pass", c.pass}});
    }
    return j.dump();
}

}  // namespace conespectra
