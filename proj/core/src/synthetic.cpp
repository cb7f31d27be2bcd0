#include "texclass/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "texclass/errors.hpp"
#include "texclass/morphology.hpp"
#include "texclass/svg.hpp"

namespace texclass {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// uniform in [0, 1); avoids distribution objects so output is identical
// across standard libraries
double rand01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rand_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * rand01(rng);
}

// Ellipse whose major-axis spine is bent by a half-cosine arc; the 2/pi
// offset recenters the arc so the centroid stays near (cx, cy).
struct Bean {
    double cx = 0, cy = 0;
    double a = 1, b = 1;
    double bend = 0;
    double cos_phi = 1, sin_phi = 0;
    double radius = 1;

    bool inside(double x, double y) const {
        const double dx = x - cx;
        const double dy = y - cy;
        const double u = dx * cos_phi + dy * sin_phi;
        if (u < -a || u > a) return false;
        const double v = -dx * sin_phi + dy * cos_phi;
        const double spine = bend * a * (std::cos(std::numbers::pi * u / (2.0 * a)) - 2.0 / std::numbers::pi);
        const double half = b * std::sqrt(std::max(0.0, 1.0 - (u / a) * (u / a)));
        return std::fabs(v - spine) <= half;
    }
};

void check_spec(const SceneSpec& s) {
    if (s.base_count < 1) throw DataError("scene: base shape count must be at least 1");
    if (s.length < 1) throw DataError("scene: series length must be at least 1");
    if (s.width < 16 || s.height < 16) throw DataError("scene: canvas must be at least 16x16");
    if (!(s.major_min > 0.0) || s.major_max < s.major_min)
        throw DataError("scene: bad major-axis range");
    if (!(s.aspect_min > 0.0) || s.aspect_max < s.aspect_min || s.aspect_max > 1.0)
        throw DataError("scene: aspect range must lie in (0, 1]");
    if (s.bend_min < 0.0 || s.bend_max < s.bend_min) throw DataError("scene: bad bend range");
    if (s.foreground < 0 || s.foreground > 255 || s.background < 0 || s.background > 255)
        throw DataError("scene: intensities must lie in [0, 255]");
    if (s.max_attempts < 1) throw DataError("scene: attempt budget must be positive");
}

GrayImage render_scene(const SceneSpec& spec, int shape_count, std::uint64_t seed, int image_index) {
    std::mt19937_64 rng(seed);
    std::vector<Bean> placed;
    placed.reserve(shape_count);
    for (int s = 0; s < shape_count; ++s) {
        bool ok = false;
        for (int attempt = 0; attempt < spec.max_attempts && !ok; ++attempt) {
            Bean bean;
            bean.a = rand_range(rng, spec.major_min, spec.major_max);
            bean.b = bean.a * rand_range(rng, spec.aspect_min, spec.aspect_max);
            bean.bend = rand_range(rng, spec.bend_min, spec.bend_max);
            const double phi = rand_range(rng, 0.0, std::numbers::pi);
            bean.cos_phi = std::cos(phi);
            bean.sin_phi = std::sin(phi);
            // |v| never exceeds 0.637*bend*a + b, so this circle covers the bean
            bean.radius = std::hypot(bean.a, 0.637 * bean.bend * bean.a + bean.b) + 1.0;
            const double lo_x = bean.radius + 1.0, hi_x = spec.width - 2.0 - bean.radius;
            const double lo_y = bean.radius + 1.0, hi_y = spec.height - 2.0 - bean.radius;
            if (lo_x >= hi_x || lo_y >= hi_y)
                throw DataError("scene image " + std::to_string(image_index) +
                                ": shapes do not fit the canvas");
            bean.cx = rand_range(rng, lo_x, hi_x);
            bean.cy = rand_range(rng, lo_y, hi_y);
            if (spec.non_overlap) {
                bool clash = false;
                for (const Bean& other : placed) {
                    const double dx = bean.cx - other.cx;
                    const double dy = bean.cy - other.cy;
                    const double need = bean.radius + other.radius + 2.0;
                    if (dx * dx + dy * dy < need * need) {
                        clash = true;
                        break;
                    }
                }
                if (clash) continue;
            }
            placed.push_back(bean);
            ok = true;
        }
        if (!ok)
            throw DataError("scene image " + std::to_string(image_index) + ": placement budget of " +
                            std::to_string(spec.max_attempts) + " attempts exhausted at shape " +
                            std::to_string(s + 1) + " of " + std::to_string(shape_count));
    }

    GrayImage img(spec.width, spec.height, spec.background);
    for (const Bean& bean : placed) {
        const int y0 = std::max(0, static_cast<int>(std::floor(bean.cy - bean.radius)));
        const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(bean.cy + bean.radius)));
        const int x0 = std::max(0, static_cast<int>(std::floor(bean.cx - bean.radius)));
        const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(bean.cx + bean.radius)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (bean.inside(x, y)) img.at(y, x) = spec.foreground;
    }
    return img;
}

}  // namespace

std::vector<GrayImage> generate_series(const SceneSpec& spec) {
    check_spec(spec);
    std::vector<GrayImage> series;
    series.reserve(spec.length);
    for (int i = 1; i <= spec.length; ++i) {
        const std::uint64_t image_seed =
            splitmix64(spec.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i));
        series.push_back(render_scene(spec, spec.base_count * i, image_seed, i));
    }
    return series;
}

GrayImage apply_craquelure(const GrayImage& img, const CraquelureSpec& spec) {
    if (spec.cracks < 0) throw DataError("craquelure: crack count must be non-negative");
    if (spec.steps < 1) throw DataError("craquelure: step count must be positive");
    if (spec.line_width < 1 || spec.line_width > 2)
        throw DataError("craquelure: line width must be 1 or 2");
    if (spec.intensity < 0 || spec.intensity > 255)
        throw DataError("craquelure: intensity must lie in [0, 255]");
    if (spec.turn < 0) throw DataError("craquelure: turn must be non-negative");

    GrayImage out = img;
    if (spec.cracks == 0) return out;
    std::mt19937_64 rng(spec.seed);
    for (int c = 0; c < spec.cracks; ++c) {
        double x = rand_range(rng, 0.0, img.width);
        double y = rand_range(rng, 0.0, img.height);
        double heading = rand_range(rng, 0.0, 2.0 * std::numbers::pi);
        for (int s = 0; s < spec.steps; ++s) {
            const int px = static_cast<int>(std::floor(x));
            const int py = static_cast<int>(std::floor(y));
            for (int dy = 0; dy < spec.line_width; ++dy)
                for (int dx = 0; dx < spec.line_width; ++dx)
                    if (out.in_bounds(py + dy, px + dx)) out.at(py + dy, px + dx) = spec.intensity;
            heading += rand_range(rng, -spec.turn, spec.turn);
            x += std::cos(heading);
            y += std::sin(heading);
        }
    }
    return out;
}

double SusceptibilityProfile::range(int m) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < images; ++i) {
        if (flag(i, m)) continue;
        lo = std::min(lo, at(i, m));
        hi = std::max(hi, at(i, m));
    }
    if (!(lo <= hi)) return std::numeric_limits<double>::quiet_NaN();
    return hi - lo;
}

SusceptibilityProfile susceptibility(const std::vector<GrayImage>& series,
                                     const std::vector<Measure>& measures, int se_size,
                                     const ExtractorConfig& cfg) {
    if (series.size() < 2) throw DataError("susceptibility: series needs at least two images");
    if (measures.empty()) throw DataError("susceptibility: no measures requested");
    for (std::size_t i = 0; i < measures.size(); ++i)
        for (std::size_t j = i + 1; j < measures.size(); ++j)
            if (measures[i] == measures[j]) throw DataError("susceptibility: duplicate measure");

    const StructuringElement se = StructuringElement::square(se_size);
    const int n = static_cast<int>(series.size());
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (int i = 0; i < n; ++i) {
        const GrayImage grad = gradient(series[i], se);
        NamedFeatures f = extract_measures(grad, measures, cfg);
        if (i == 0)
            names = f.names;
        else if (f.names != names)
            throw DataError("susceptibility: inconsistent feature sets across the series");
        rows.push_back(std::move(f.values));
    }
    const int nf = static_cast<int>(names.size());

    SusceptibilityProfile prof;
    prof.images = n;
    // measure list in extraction (canonical) order
    for (const std::string& name : names) {
        const Measure m = measure_of_feature(name);
        if (prof.measures.empty() || prof.measures.back() != m) prof.measures.push_back(m);
    }
    std::vector<std::vector<int>> idx(prof.measures.size());
    for (int j = 0; j < nf; ++j) {
        const Measure m = measure_of_feature(names[j]);
        for (std::size_t k = 0; k < prof.measures.size(); ++k)
            if (prof.measures[k] == m) idx[k].push_back(j);
    }

    // min-max normalize each feature across the series
    std::vector<std::vector<double>> norm(n, std::vector<double>(nf, 0.0));
    std::vector<std::uint8_t> constant(nf, 0);
    for (int j = 0; j < nf; ++j) {
        double lo = rows[0][j], hi = rows[0][j];
        for (int i = 1; i < n; ++i) {
            lo = std::min(lo, rows[i][j]);
            hi = std::max(hi, rows[i][j]);
        }
        if (hi - lo <= 0.0) {
            for (int i = 0; i < n; ++i) norm[i][j] = 0.5;
            constant[j] = 1;
            prof.constant_features.push_back(names[j]);
        } else {
            for (int i = 0; i < n; ++i) norm[i][j] = (rows[i][j] - lo) / (hi - lo);
        }
    }

    prof.ratios.assign(static_cast<std::size_t>(n) * prof.measures.size(), 0.0);
    prof.flagged.assign(prof.ratios.size(), 0);
    for (int i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < prof.measures.size(); ++k) {
            const auto& cols = idx[k];
            bool all_constant = true;
            for (int j : cols) all_constant = all_constant && constant[j] != 0;
            double mu = 0.0;
            for (int j : cols) mu += norm[i][j];
            mu /= static_cast<double>(cols.size());
            double ss = 0.0;
            for (int j : cols) {
                const double d = norm[i][j] - mu;
                ss += d * d;
            }
            const double sigma = std::sqrt(ss / static_cast<double>(cols.size()));
            const std::size_t slot = static_cast<std::size_t>(i) * prof.measures.size() + k;
            if (mu < 1e-12 || all_constant) {
                prof.flagged[slot] = 1;
                prof.ratios[slot] = std::numeric_limits<double>::quiet_NaN();
            } else {
                prof.ratios[slot] = sigma / mu;
            }
        }
    }
    return prof;
}

void write_susceptibility_csv(const std::string& path, const SusceptibilityProfile& prof) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "image,measure,ratio,flagged\n";
    char buf[64];
    for (int i = 0; i < prof.images; ++i)
        for (std::size_t k = 0; k < prof.measures.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", prof.at(i, static_cast<int>(k)));
            out << (i + 1) << ',' << measure_name(prof.measures[k]) << ',' << buf << ','
                << (prof.flag(i, static_cast<int>(k)) ? 1 : 0) << '\n';
        }
    if (!out) throw DataError("write failed: " + path);
}

void write_susceptibility_svg(const std::string& path, const SusceptibilityProfile& prof,
                              const std::string& title) {
    LineChart chart;
    chart.title = title;
    chart.x_label = "image index";
    chart.y_label = "sigma/mu";
    for (std::size_t k = 0; k < prof.measures.size(); ++k) {
        LineChart::Series s;
        s.name = measure_name(prof.measures[k]);
        for (int i = 0; i < prof.images; ++i) {
            s.x.push_back(i + 1.0);
            s.y.push_back(prof.at(i, static_cast<int>(k)));
        }
        chart.series.push_back(std::move(s));
    }
    write_svg_chart(path, chart);
}

}  // namespace texclass
