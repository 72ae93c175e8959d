#include "fvfp/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace fvfp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

// composite two-point Gauss on [a,b]
double integrate(const std::function<double(double)>& f, double a, double b, int cells = 4096) {
    const double h = (b - a) / cells;
    const double off = 0.5 * h * 0.57735026918962576451;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double mid = a + (i + 0.5) * h;
        sum += f(mid - off) + f(mid + off);
    }
    return 0.5 * h * sum;
}

BuiltinProblem make_accuracy1d() {
    Problem1D p;
    p.spec.xmin = -kPi;
    p.spec.xmax = kPi;
    p.spec.V = [](double x) { return std::cos(x); };
    p.spec.W = [](double s) { return std::cos(s); };
    p.spec.intensity = 1.0;
    p.spec.rho0 = [](double x) { return 2.0 + std::cos(x); };
    p.spec.source = [](double x, double t) {
        const double c = std::cos(x);
        return kPi * std::exp(-2.0 * t) * (2.0 * c * c + 2.0 * c - 1.0) +
               std::exp(-t) * (2.0 * c * c + 2.0 * c - 3.0);
    };
    p.exact = [](double x, double t) { return std::exp(-t) * (2.0 + std::cos(x)); };
    p.default_n = 80;
    p.default_scheme = "first";
    p.default_tau_rule = "ch";
    p.default_tau = 0.1;
    p.default_t_end = 1.0;
    return {"accuracy1d", "1D manufactured accuracy test: V=W=cos(x), exact e^{-t}(2+cos x)",
            std::move(p)};
}

BuiltinProblem make_fokker_planck() {
    Problem1D p;
    p.spec.xmin = -5.0;
    p.spec.xmax = 5.0;
    p.spec.V = [](double x) { return 0.5 * x * x; };
    const double height =
        integrate([](double x) { return std::exp(-0.5 * x * x); }, -5.0, 5.0) / 7.0;
    p.spec.rho0 = [height](double x) { return std::abs(x) <= 3.5 ? height : 0.0; };
    p.default_n = 200;
    p.default_scheme = "first";
    p.default_tau_rule = "fixed";
    p.default_tau = 0.1;
    p.default_t_end = 4.0;
    p.default_snapshots = {0.0, 0.2, 0.5, 1.0, 4.0};
    return {"fokker_planck",
            "linear Fokker-Planck relaxation: V=x^2/2, plateau initial data, steady e^{-x^2/2}",
            std::move(p)};
}

BuiltinProblem make_doi_onsager(double alpha, double t_end, std::vector<double> snaps,
                                std::string id) {
    Problem1D p;
    p.spec.xmin = 0.0;
    p.spec.xmax = 2.0 * kPi;
    p.spec.W = [](double s) {
        const double v = std::sin(s);
        return v * v;
    };
    p.spec.intensity = alpha;
    p.spec.rho0 = [](double x) { return (x + 1.0) / (2.0 * kPi * (kPi + 1.0)); };
    p.default_n = 80;
    p.default_scheme = "first";
    p.default_tau_rule = "fixed";
    p.default_tau = 0.1;
    p.default_t_end = t_end;
    p.default_snapshots = std::move(snaps);
    return {std::move(id),
            "Doi-Onsager with Maier-Saupe potential W=sin^2, intensity " + std::to_string(alpha),
            std::move(p)};
}

BuiltinProblem make_accuracy2d() {
    Problem2D p;
    p.spec.xmin = -0.5 * kPi;
    p.spec.xmax = 0.5 * kPi;
    p.spec.ymin = -0.5 * kPi;
    p.spec.ymax = 0.5 * kPi;
    p.spec.V = [](double x, double y) { return std::sin(x) * std::sin(y); };
    p.spec.rho0 = [](double x, double y) { return 2.0 + std::sin(x) * std::sin(y); };
    p.spec.source = [](double x, double y, double t) {
        const double sx = std::sin(x), sy = std::sin(y);
        const double cx = std::cos(x), cy = std::cos(y);
        return std::exp(-t) * (2.0 * sx * sx * sy * sy + 5.0 * sx * sy - cx * cx * sy * sy -
                               sx * sx * cy * cy - 2.0);
    };
    p.exact = [](double x, double y, double t) {
        return std::exp(-t) * (2.0 + std::sin(x) * std::sin(y));
    };
    p.default_nx = 20;
    p.default_ny = 20;
    p.default_scheme = "first";
    p.default_tau_rule = "ch2";
    p.default_tau = 0.1;
    p.default_t_end = 1.0;
    return {"accuracy2d", "2D manufactured accuracy test: V=sin(x)sin(y), exact e^{-t}(2+sin x sin y)",
            std::move(p)};
}

BuiltinProblem make_keller_segel(bool supercritical) {
    Problem2D p;
    const double half = supercritical ? 1.5 : 5.0;
    p.spec.xmin = -half;
    p.spec.xmax = half;
    p.spec.ymin = -half;
    p.spec.ymax = half;
    // Green-function kernel of the parabolic-elliptic model; chi carried by intensity
    p.spec.W = [](double sx, double sy) {
        return std::log(std::sqrt(sx * sx + sy * sy)) / (2.0 * kPi);
    };
    p.spec.intensity = 1.0;  // chi
    const double height = 2.0 * (kPi + (supercritical ? 0.2 : -0.2));
    p.spec.rho0 = [height](double x, double y) {
        return (std::abs(x) <= 1.0 && std::abs(y) <= 1.0) ? height : 0.0;
    };
    p.default_nx = 51;
    p.default_ny = 51;
    p.default_scheme = "first";
    p.default_tau_rule = "fixed";
    p.default_tau = 0.01;
    if (supercritical) {
        p.default_t_end = 2.0;
        p.default_snapshots = {0.0, 0.5, 1.0, 1.5, 2.0};
    } else {
        p.default_t_end = 16.0;
        p.default_snapshots = {0.0, 2.0, 8.0, 12.0, 16.0};
    }
    const char* id = supercritical ? "keller_segel_super" : "keller_segel_sub";
    const char* note = supercritical ? "mass 8(pi+0.2) > 8pi, concentrates at the origin"
                                     : "mass 8(pi-0.2) < 8pi, spreads";
    return {id, std::string("Keller-Segel chemotaxis, log kernel, chi=1; ") + note, std::move(p)};
}

}  // namespace

const std::vector<BuiltinProblem>& builtin_problems() {
    static const std::vector<BuiltinProblem> catalog = [] {
        std::vector<BuiltinProblem> v;
        v.push_back(make_accuracy1d());
        v.push_back(make_fokker_planck());
        v.push_back(make_doi_onsager(3.0, 30.0, {0.0, 0.5, 5.0, 15.0, 25.0, 30.0},
                                     "doi_onsager_a3"));
        v.push_back(make_doi_onsager(5.0, 35.0, {0.0, 0.5, 1.0, 5.0, 25.0, 35.0},
                                     "doi_onsager_a5"));
        v.push_back(make_accuracy2d());
        v.push_back(make_keller_segel(false));
        v.push_back(make_keller_segel(true));
        return v;
    }();
    return catalog;
}

const BuiltinProblem& find_problem(const std::string& id) {
    for (const BuiltinProblem& p : builtin_problems())
        if (p.id == id) return p;
    throw std::invalid_argument("unknown problem id: " + id);
}

}  // namespace fvfp
