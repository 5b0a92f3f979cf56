#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "statgeo/model.hpp"

namespace statgeo {

// ---------------------------------------------------------------------------
// Simplex points and the barycentric vector-field families
// ---------------------------------------------------------------------------

struct SimplexPoint {
    std::vector<double> p;  // barycentric coordinates, sum 1
};

inline SimplexPoint make_simplex_point(std::vector<double> p, double tol = 1e-12) {
    if (p.size() < 2) throw std::invalid_argument("simplex point needs at least 2 coordinates");
    double sum = 0.0;
    for (double x : p) {
        if (!std::isfinite(x)) throw std::invalid_argument("simplex coordinate not finite");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("barycentric coordinates must sum to 1");
    return SimplexPoint{std::move(p)};
}

inline bool is_interior(const SimplexPoint& point) {
    for (double x : point.p)
        if (!(x > 0.0 && x < 1.0)) return false;
    return true;
}

struct BarycentricFields {
    // One vector per vertex k, all living in the ambient R^{n+1}.
    std::vector<Eigen::VectorXd> y;  // e_k - p
    std::vector<Eigen::VectorXd> z;  // e_k - q_k = y_k / (1 - p_k)
    std::vector<Eigen::VectorXd> q;  // conditional distribution on the k-th face
    std::vector<Eigen::VectorXd> x;  // p_k * y_k
    Eigen::VectorXd x_sum;           // vanishes identically
};

inline BarycentricFields barycentric_fields(const SimplexPoint& point) {
    if (!is_interior(point)) throw std::domain_error("conditional undefined on boundary");
    const auto d = static_cast<Eigen::Index>(point.p.size());
    Eigen::VectorXd p(d);
    for (Eigen::Index i = 0; i < d; ++i) p(i) = point.p[static_cast<std::size_t>(i)];

    BarycentricFields out;
    out.x_sum = Eigen::VectorXd::Zero(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        Eigen::VectorXd ek = Eigen::VectorXd::Zero(d);
        ek(k) = 1.0;
        Eigen::VectorXd yk = ek - p;
        Eigen::VectorXd qk = p / (1.0 - p(k));
        qk(k) = 0.0;
        out.y.push_back(yk);
        out.z.push_back(yk / (1.0 - p(k)));
        out.q.push_back(qk);
        out.x.push_back(p(k) * yk);
        out.x_sum += out.x.back();
    }
    return out;
}

// eta = 2 sqrt(p): the simplex sits on the sphere of radius 2, and the
// pullback of the ambient Euclidean metric is the Fisher metric of the
// multinomial in the first n coordinates.
struct SphereEmbedding {
    std::vector<double> eta;
    double norm = 0.0;             // sum eta^2, always 4
    double metric_residual = 0.0;  // max |J^T J - g_Fisher|
};

inline SphereEmbedding sphere_embedding(const SimplexPoint& point) {
    if (!is_interior(point)) throw std::domain_error("sphere embedding undefined on boundary");
    const std::size_t d = point.p.size();
    const std::size_t n = d - 1;
    SphereEmbedding out;
    out.eta.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out.eta[i] = 2.0 * std::sqrt(point.p[i]);
        out.norm += out.eta[i] * out.eta[i];
    }

    // Jacobian of eta(p_1..p_n) with p_{n+1} = 1 - sum.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        J(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) =
            1.0 / std::sqrt(point.p[a]);
        J(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a)) =
            -1.0 / std::sqrt(point.p[n]);
    }
    Eigen::MatrixXd pullback = J.transpose() * J;
    double residual = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const double fisher = (a == b ? 1.0 / point.p[a] : 0.0) + 1.0 / point.p[n];
            residual = std::max(residual, std::abs(pullback(static_cast<Eigen::Index>(a),
                                                            static_cast<Eigen::Index>(b)) -
                                                   fisher));
        }
    out.metric_residual = residual;
    return out;
}

// ---------------------------------------------------------------------------
// Cevians and the Ceva relations
// ---------------------------------------------------------------------------

using Point = Eigen::VectorXd;

inline std::array<Point, 3> reference_triangle() {
    std::array<Point, 3> v;
    v[0] = Eigen::Vector2d(0.0, 0.0);
    v[1] = Eigen::Vector2d(1.0, 0.0);
    v[2] = Eigen::Vector2d(0.5, std::sqrt(3.0) / 2.0);
    return v;
}

inline std::vector<Point> reference_tetrahedron() {
    std::vector<Point> v(4);
    v[0] = Eigen::Vector3d(0.0, 0.0, 0.0);
    v[1] = Eigen::Vector3d(1.0, 0.0, 0.0);
    v[2] = Eigen::Vector3d(0.5, std::sqrt(3.0) / 2.0, 0.0);
    v[3] = Eigen::Vector3d(0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0);
    return v;
}

namespace detail {

// Parameter t with foot = base + t (tip - base), plus the collinearity
// residual relative to the segment length.
inline std::pair<double, double> line_parameter(const Point& base, const Point& tip,
                                                const Point& foot) {
    const Point dir = tip - base;
    const double len2 = dir.squaredNorm();
    const double t = (foot - base).dot(dir) / len2;
    const double residual = (foot - base - t * dir).norm() / std::sqrt(len2);
    return {t, residual};
}

}  // namespace detail

// Signed Ceva product (A'B/A'C)(B'C/B'A)(C'A/C'B) for feet A', B', C' on the
// lines BC, CA, AB. Equals -1 exactly when the three Cevians are concurrent
// or parallel.
inline double ceva_product(const std::array<Point, 3>& tri, const std::array<Point, 3>& feet,
                           double collinear_tol = 1e-10) {
    double product = 1.0;
    for (int k = 0; k < 3; ++k) {
        const Point& base = tri[(k + 1) % 3];
        const Point& tip = tri[(k + 2) % 3];
        const auto [t, residual] = detail::line_parameter(base, tip, feet[k]);
        if (residual > collinear_tol)
            throw std::invalid_argument("cevian foot not collinear with its side");
        if (std::abs(t) < 1e-12 || std::abs(1.0 - t) < 1e-12)
            throw std::domain_error("degenerate ratio");
        product *= -t / (1.0 - t);
    }
    return product;
}

// Feet of the Cevians through an interior point, by line-line intersection
// of (vertex, point) with the opposite side.
inline std::array<Point, 3> cevian_feet_through(const std::array<Point, 3>& tri,
                                                const Point& interior) {
    std::array<Point, 3> feet;
    for (int k = 0; k < 3; ++k) {
        const Point& vertex = tri[k];
        const Point& base = tri[(k + 1) % 3];
        const Point& tip = tri[(k + 2) % 3];
        // vertex + s (interior - vertex) = base + t (tip - base)
        Eigen::Matrix2d M;
        M.col(0) = interior - vertex;
        M.col(1) = -(tip - base);
        const Eigen::Vector2d rhs = base - vertex;
        const Eigen::Vector2d st = M.fullPivLu().solve(rhs);
        feet[k] = base + st(1) * (tip - base);
    }
    return feet;
}

// Feet of three parallel Cevians with common direction dir.
inline std::array<Point, 3> cevian_feet_parallel(const std::array<Point, 3>& tri,
                                                 const Point& dir) {
    std::array<Point, 3> feet;
    for (int k = 0; k < 3; ++k) {
        const Point& vertex = tri[k];
        const Point& base = tri[(k + 1) % 3];
        const Point& tip = tri[(k + 2) % 3];
        Eigen::Matrix2d M;
        M.col(0) = dir;
        M.col(1) = -(tip - base);
        if (std::abs(M.determinant()) < 1e-14)
            throw std::domain_error("cevian direction parallel to a side");
        const Eigen::Vector2d st = M.fullPivLu().solve(Eigen::Vector2d(base - vertex));
        feet[k] = base + st(1) * (tip - base);
    }
    return feet;
}

struct CevianConfig {
    enum class Mode { concurrent, parallel };
    std::vector<Point> vertices;  // n+1 affine points
    std::vector<Point> feet;      // feet[k] on the facet opposite vertex k
    Mode mode = Mode::concurrent;
};

// Checks the type invariants: every foot lies in the affine hull of its
// facet (1e-12) and, in concurrent mode, all Cevian lines pass through one
// common point (1e-10). Throws on violation.
inline void validate_cevian_config(const CevianConfig& config) {
    const std::size_t count = config.vertices.size();
    if (config.feet.size() != count)
        throw std::invalid_argument("cevian config needs one foot per vertex");
    const auto dim = config.vertices[0].size();

    double scale = 0.0;
    for (const auto& v : config.vertices) scale = std::max(scale, v.norm());
    scale = std::max(scale, 1.0);

    for (std::size_t k = 0; k < count; ++k) {
        // affine combination of the opposite facet's vertices
        std::vector<const Point*> facet;
        for (std::size_t i = 0; i < count; ++i)
            if (i != k) facet.push_back(&config.vertices[i]);
        const auto cols = static_cast<Eigen::Index>(facet.size() - 1);
        Eigen::MatrixXd M(dim, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            M.col(c) = *facet[static_cast<std::size_t>(c)] - *facet.back();
        const Eigen::VectorXd rhs = config.feet[k] - *facet.back();
        const Eigen::VectorXd w = M.colPivHouseholderQr().solve(rhs);
        if ((M * w - rhs).norm() > 1e-12 * scale)
            throw std::invalid_argument("cevian foot does not lie on its face");
    }

    if (config.mode == CevianConfig::Mode::concurrent) {
        // Least-squares common point of all Cevian lines, then the worst
        // point-to-line distance.
        Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
        std::vector<Eigen::VectorXd> dirs(count);
        for (std::size_t k = 0; k < count; ++k) {
            dirs[k] = (config.feet[k] - config.vertices[k]).normalized();
            const Eigen::MatrixXd proj =
                Eigen::MatrixXd::Identity(dim, dim) - dirs[k] * dirs[k].transpose();
            lhs += proj;
            rhs += proj * config.vertices[k];
        }
        const Eigen::VectorXd common = lhs.colPivHouseholderQr().solve(rhs);
        for (std::size_t k = 0; k < count; ++k) {
            const Eigen::VectorXd offset = common - config.vertices[k];
            const double dist = (offset - offset.dot(dirs[k]) * dirs[k]).norm();
            if (dist > 1e-10 * scale)
                throw std::invalid_argument("cevians are not concurrent");
        }
    }
}

struct GeneralizedCevaReport {
    double max_deviation = 0.0;  // max |product - 1| over vertex triples
    std::size_t triples = 0;
};

using EdgePointMap = std::map<std::pair<std::size_t, std::size_t>, Point>;

// Edge points induced from an interior point with barycentric weights c:
// B_ij divides edge A_iA_j in the ratio c_j : c_i.
inline EdgePointMap edge_points_from_interior(const std::vector<Point>& vertices,
                                              const std::vector<double>& weights) {
    if (weights.size() != vertices.size())
        throw std::invalid_argument("one barycentric weight per vertex required");
    EdgePointMap out;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            const double wi = weights[i], wj = weights[j];
            if (!(wi > 0.0) || !(wj > 0.0))
                throw std::invalid_argument("interior point weights must be positive");
            out[{i, j}] = (wi * vertices[i] + wj * vertices[j]) / (wi + wj);
        }
    return out;
}

// Unsigned triple products (A_iB_ij/B_ijA_j)(A_jB_jk/B_jkA_k)(A_kB_ik/B_ikA_i)
// over all i<j<k; each equals 1 exactly when the Cevian hyperplanes share a
// point.
inline GeneralizedCevaReport generalized_ceva_check(const std::vector<Point>& vertices,
                                                    const EdgePointMap& edge_points,
                                                    double collinear_tol = 1e-10) {
    const std::size_t count = vertices.size();
    if (count < 3) throw std::invalid_argument("generalized Ceva needs at least 3 vertices");

    std::map<std::pair<std::size_t, std::size_t>, double> ratio;  // A_iB_ij / B_ijA_j
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
            const auto it = edge_points.find({i, j});
            if (it == edge_points.end())
                throw std::invalid_argument("missing edge point B_" + std::to_string(i + 1) +
                                            std::to_string(j + 1));
            const auto [t, residual] = detail::line_parameter(vertices[i], vertices[j], it->second);
            if (residual > collinear_tol)
                throw std::invalid_argument("edge point not collinear with its edge");
            if (t < 1e-12 || t > 1.0 - 1e-12) throw std::domain_error("degenerate edge point");
            ratio[{i, j}] = t / (1.0 - t);
        }

    GeneralizedCevaReport report;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j)
            for (std::size_t k = j + 1; k < count; ++k) {
                const double product = ratio[{i, j}] * ratio[{j, k}] / ratio[{i, k}];
                report.max_deviation = std::max(report.max_deviation, std::abs(product - 1.0));
                ++report.triples;
            }
    return report;
}

// ---------------------------------------------------------------------------
// Planar 3-webs: x = const, y = const, F(x,y) = const
// ---------------------------------------------------------------------------

struct WebFunction {
    std::string name;
    std::function<double(double, double)> f;
    std::function<double(double, double)> fx;  // exact partials; may be empty
    std::function<double(double, double)> fy;
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

    bool has_exact_partials() const { return static_cast<bool>(fx) && static_cast<bool>(fy); }
    bool contains(double x, double y) const {
        return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
    }
};

namespace detail {

inline double partial_x(const WebFunction& web, double x, double y, double h) {
    if (web.fx) return web.fx(x, y);
    return (web.f(x + h, y) - web.f(x - h, y)) / (2.0 * h);
}

inline double partial_y(const WebFunction& web, double x, double y, double h) {
    if (web.fy) return web.fy(x, y);
    return (web.f(x, y + h) - web.f(x, y - h)) / (2.0 * h);
}

}  // namespace detail

// Builds a web function and verifies the foliation condition F_x != 0,
// F_y != 0 on a sample grid over the box.
inline WebFunction make_web_function(std::string name, std::function<double(double, double)> f,
                                     std::function<double(double, double)> fx,
                                     std::function<double(double, double)> fy, double x_lo,
                                     double x_hi, double y_lo, double y_hi,
                                     std::size_t grid = 17) {
    if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw std::invalid_argument("empty web domain box");
    WebFunction web{std::move(name), std::move(f), std::move(fx), std::move(fy),
                    x_lo, x_hi, y_lo, y_hi};
    const double h = 1e-6 * std::max(x_hi - x_lo, y_hi - y_lo);
    for (std::size_t i = 0; i < grid; ++i)
        for (std::size_t j = 0; j < grid; ++j) {
            const double gx = x_lo + (x_hi - x_lo) * (static_cast<double>(i) + 0.5) /
                                         static_cast<double>(grid);
            const double gy = y_lo + (y_hi - y_lo) * (static_cast<double>(j) + 0.5) /
                                         static_cast<double>(grid);
            const double px = detail::partial_x(web, gx, gy, h);
            const double py = detail::partial_y(web, gx, gy, h);
            if (!std::isfinite(px) || !std::isfinite(py) || std::abs(px) < 1e-12 ||
                std::abs(py) < 1e-12)
                throw std::invalid_argument("web partial derivative vanishes inside the box");
        }
    return web;
}

// The three reference webs used throughout: the parallel web, the
// log-parallelizable product web, and a web with nonzero curvature.
inline WebFunction builtin_web(const std::string& name) {
    if (name == "sum")
        return make_web_function(
            "sum", [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
            [](double, double) { return 1.0; }, 0.0, 1.0, 0.0, 1.0);
    if (name == "product")
        return make_web_function(
            "product", [](double x, double y) { return x * y; },
            [](double, double y) { return y; }, [](double x, double) { return x; }, 0.5, 2.0, 0.5,
            2.0);
    if (name == "cubic")
        return make_web_function(
            "cubic", [](double x, double y) { return x + y + x * y * y; },
            [](double, double y) { return 1.0 + y * y; },
            [](double x, double y) { return 1.0 + 2.0 * x * y; }, 0.5, 2.0, 0.5, 2.0);
    throw std::invalid_argument("unknown builtin web: " + name);
}

// Bivariate polynomial web loaded from JSON: coefficient matrix c[i][j] for
// x^i y^j plus the domain box. Partials are exact.
inline WebFunction load_web(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed web file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("coeffs") || !doc.contains("box"))
        throw std::invalid_argument("web file needs keys coeffs and box");
    std::vector<std::vector<double>> coeffs;
    for (const auto& row : doc["coeffs"]) {
        std::vector<double> r;
        for (const auto& e : row) r.push_back(e.get<double>());
        coeffs.push_back(std::move(r));
    }
    const auto box = doc["box"].get<std::vector<double>>();
    if (box.size() != 4) throw std::invalid_argument("box must be [x_lo, x_hi, y_lo, y_hi]");
    const std::string name = doc.value("name", std::string("custom"));

    auto eval = [coeffs](double x, double y) {
        double acc = 0.0;
        double xp = 1.0;
        for (const auto& row : coeffs) {
            double yp = 1.0, inner = 0.0;
            for (double c : row) {
                inner += c * yp;
                yp *= y;
            }
            acc += xp * inner;
            xp *= x;
        }
        return acc;
    };
    auto eval_dx = [coeffs](double x, double y) {
        double acc = 0.0;
        double xp = 1.0;
        for (std::size_t i = 1; i < coeffs.size(); ++i) {
            double yp = 1.0, inner = 0.0;
            for (double c : coeffs[i]) {
                inner += c * yp;
                yp *= y;
            }
            acc += static_cast<double>(i) * xp * inner;
            xp *= x;
        }
        return acc;
    };
    auto eval_dy = [coeffs](double x, double y) {
        double acc = 0.0;
        double xp = 1.0;
        for (const auto& row : coeffs) {
            double yp = 1.0, inner = 0.0;
            for (std::size_t j = 1; j < row.size(); ++j) {
                inner += static_cast<double>(j) * row[j] * yp;
                yp *= y;
            }
            acc += xp * inner;
            xp *= x;
        }
        return acc;
    };
    return make_web_function(name, eval, eval_dx, eval_dy, box[0], box[1], box[2], box[3]);
}

inline WebFunction load_web_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open web file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_web(buf.str());
}

namespace detail {

// Bracketed 1-D root find: geometric expansion from the initial guess, then
// bisection, then a Newton polish when an exact derivative is available.
template <typename G, typename DG>
double solve_bracketed(G&& g, DG&& dg, bool has_dg, double guess, double lo, double hi,
                       double tol = 1e-12, int max_iter = 200) {
    guess = std::min(std::max(guess, lo), hi);
    double g0 = g(guess);
    if (g0 == 0.0) return guess;

    double a = guess, b = guess, ga = g0, gb = g0;
    const double span = hi - lo;
    bool bracketed = false;
    double step = 1e-6 * span;
    double left = guess, right = guess;
    double gleft = g0, gright = g0;
    bool left_open = guess > lo, right_open = guess < hi;
    while ((left_open || right_open) && !bracketed) {
        if (right_open) {
            const double next = std::min(guess + step, hi);
            const double gn = g(next);
            if (gn == 0.0) return next;
            if ((gn < 0.0) != (gright < 0.0)) {
                a = right;
                ga = gright;
                b = next;
                gb = gn;
                bracketed = true;
                break;
            }
            right = next;
            gright = gn;
            if (next >= hi) right_open = false;
        }
        if (left_open) {
            const double next = std::max(guess - step, lo);
            const double gn = g(next);
            if (gn == 0.0) return next;
            if ((gn < 0.0) != (gleft < 0.0)) {
                a = next;
                ga = gn;
                b = left;
                gb = gleft;
                bracketed = true;
                break;
            }
            left = next;
            gleft = gn;
            if (next <= lo) left_open = false;
        }
        step *= 2.0;
    }
    if (!bracketed) throw std::domain_error("leaf exits domain");

    // A monotone crossing changes sign exactly once; more than one sign
    // change across the bracket means the leaf doubles back.
    {
        int changes = 0;
        double prev = ga;
        for (int s = 1; s <= 8; ++s) {
            const double t = a + (b - a) * static_cast<double>(s) / 9.0;
            const double gt = g(t);
            if (gt != 0.0 && (gt < 0.0) != (prev < 0.0)) {
                ++changes;
                prev = gt;
            }
        }
        if ((gb < 0.0) != (prev < 0.0)) ++changes;
        if (changes > 1) throw std::domain_error("non-monotone leaf crossing");
    }

    const double bisect_tol = has_dg ? 1e-9 : std::min(tol, 1e-13);
    int iter = 0;
    while (b - a > bisect_tol && iter < max_iter) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (ga < 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
            gb = gm;
        }
        ++iter;
    }
    double root = 0.5 * (a + b);

    if (has_dg) {
        double best = std::abs(g(root));
        for (int it = 0; it < 6 && best > 0.0; ++it) {
            const double dr = dg(root);
            if (dr == 0.0) break;
            double next = root - g(root) / dr;
            next = std::min(std::max(next, lo), hi);
            const double gn = std::abs(g(next));
            if (gn >= best) break;
            root = next;
            best = gn;
        }
    }
    return root;
}

}  // namespace detail

struct HexagonStep {
    double eps = 0.0;
    double defect = 0.0;
    std::array<std::pair<double, double>, 7> points;  // P0 .. P6
};

// Thomsen closure figure around (a, b): walk leaves of the three foliations
// in the fixed alternating order; the re-entry gap on the line y = b is the
// closure defect.
inline HexagonStep hexagon_closure(const WebFunction& web, double a, double b, double eps,
                                   double tol = 1e-12) {
    if (!web.contains(a, b)) throw std::invalid_argument("hexagon center outside domain box");
    const double f_center = web.f(a, b);

    auto solve_y_on_vertical = [&](double target, double guess) {
        auto g = [&](double y) { return web.f(a, y) - target; };
        auto dg = [&](double y) { return web.fy ? web.fy(a, y) : 0.0; };
        return detail::solve_bracketed(g, dg, web.has_exact_partials(), guess, web.y_lo, web.y_hi,
                                       tol);
    };
    auto solve_x_on_horizontal = [&](double y_fixed, double target, double guess) {
        auto g = [&](double x) { return web.f(x, y_fixed) - target; };
        auto dg = [&](double x) { return web.fx ? web.fx(x, y_fixed) : 0.0; };
        return detail::solve_bracketed(g, dg, web.has_exact_partials(), guess, web.x_lo, web.x_hi,
                                       tol);
    };

    HexagonStep step;
    step.eps = eps;
    const std::pair<double, double> p0{a + eps, b};
    if (!web.contains(p0.first, p0.second)) throw std::domain_error("leaf exits domain");

    const double y1 = solve_y_on_vertical(web.f(p0.first, p0.second), b);
    const std::pair<double, double> p1{a, y1};
    const double x2 = solve_x_on_horizontal(y1, f_center, a);
    const std::pair<double, double> p2{x2, y1};
    const std::pair<double, double> p3{x2, b};
    if (!web.contains(p3.first, p3.second)) throw std::domain_error("leaf exits domain");
    const double y4 = solve_y_on_vertical(web.f(p3.first, p3.second), b);
    const std::pair<double, double> p4{a, y4};
    const double x5 = solve_x_on_horizontal(y4, f_center, a);
    const std::pair<double, double> p5{x5, y4};
    const std::pair<double, double> p6{x5, b};

    step.points = {p0, p1, p2, p3, p4, p5, p6};
    step.defect = std::hypot(p6.first - p0.first, p6.second - p0.second);
    return step;
}

// Planar web curvature K = -(F_x F_y)^{-1} d^2/dxdy log(F_x/F_y). The log
// ratio is taken with absolute values; the partials have constant sign on
// the box so the mixed derivative is unaffected.
inline double web_curvature(const WebFunction& web, double x, double y, double step = 1e-4) {
    const double margin = web.has_exact_partials() ? step : 2.0 * step;
    if (!web.contains(x - margin, y - margin) || !web.contains(x + margin, y + margin))
        throw std::invalid_argument("curvature stencil leaves the domain box");

    auto log_ratio = [&](double px, double py) {
        const double fx = detail::partial_x(web, px, py, step);
        const double fy = detail::partial_y(web, px, py, step);
        if (std::abs(fx) < 1e-14 || std::abs(fy) < 1e-14)
            throw std::domain_error("vanishing partial derivative");
        return std::log(std::abs(fx / fy));
    };
    const double mixed = (log_ratio(x + step, y + step) - log_ratio(x + step, y - step) -
                          log_ratio(x - step, y + step) + log_ratio(x - step, y - step)) /
                         (4.0 * step * step);
    const double fx = detail::partial_x(web, x, y, step);
    const double fy = detail::partial_y(web, x, y, step);
    if (std::abs(fx) < 1e-14 || std::abs(fy) < 1e-14)
        throw std::domain_error("vanishing partial derivative");
    return -mixed / (fx * fy);
}

}  // namespace statgeo
