#include "craftgen/color.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "craftgen/error.hpp"
#include "craftgen/raster.hpp"

namespace craftgen {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Linear sRGB -> XYZ, D65.
constexpr Mat3 kRgbToXyz{{{0.4124564, 0.3575761, 0.1804375},
                          {0.2126729, 0.7151522, 0.0721750},
                          {0.0193339, 0.1191920, 0.9503041}}};

// The reference white is the image of RGB (1,1,1) so that white lands on
// L = 100, a = b = 0 exactly.
constexpr Vec3 kWhite{kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
                      kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
                      kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2]};

Mat3 invert(const Mat3& m) {
    const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    Mat3 inv{};
    inv[0][0] = c00 / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = c01 / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = c02 / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

const Mat3& xyz_to_rgb_matrix() {
    static const Mat3 inv = invert(kRgbToXyz);
    return inv;
}

Vec3 apply(const Mat3& m, const Vec3& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

double srgb_decode(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_encode(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

constexpr double kDelta = 6.0 / 29.0;

double lab_f(double t) {
    return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
    return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

constexpr double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
constexpr double rad(double d) { return d * std::numbers::pi / 180.0; }

// Tolerance below which a channel outside [0,1] is treated as round-off
// rather than a gamut clip.
constexpr double kClipSlack = 1e-9;

}  // namespace

LabColor rgb_to_lab(const RgbColor& c) {
    const Vec3 xyz = apply(kRgbToXyz, {srgb_decode(c.r), srgb_decode(c.g), srgb_decode(c.b)});
    const double fx = lab_f(xyz[0] / kWhite[0]);
    const double fy = lab_f(xyz[1] / kWhite[1]);
    const double fz = lab_f(xyz[2] / kWhite[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

RgbColor lab_to_rgb(const LabColor& c, GamutTally& tally) {
    const double fy = (c.l + 16.0) / 116.0;
    const double fx = fy + c.a / 500.0;
    const double fz = fy - c.b / 200.0;
    const Vec3 xyz{kWhite[0] * lab_f_inv(fx), kWhite[1] * lab_f_inv(fy),
                   kWhite[2] * lab_f_inv(fz)};
    const Vec3 lin = apply(xyz_to_rgb_matrix(), xyz);

    std::size_t clipped = 0;
    auto encode = [&](double v) {
        const double e = srgb_encode(v);
        if (e < -kClipSlack || e > 1.0 + kClipSlack) ++clipped;
        return std::clamp(e, 0.0, 1.0);
    };
    const RgbColor out{encode(lin[0]), encode(lin[1]), encode(lin[2])};
    if (clipped > 0) {
        ++tally.clipped_pixels;
        tally.clipped_channels += clipped;
    }
    return out;
}

RgbColor lab_to_rgb(const LabColor& c) {
    GamutTally ignored;
    return lab_to_rgb(c, ignored);
}

HsvColor rgb_to_hsv(const RgbColor& c) {
    const double mx = std::max({c.r, c.g, c.b});
    const double mn = std::min({c.r, c.g, c.b});
    const double d = mx - mn;
    HsvColor out{0.0, mx > 0.0 ? d / mx : 0.0, mx};
    if (d <= 0.0) {
        out.s = 0.0;
        return out;
    }
    double h;
    if (mx == c.r) {
        h = 60.0 * std::fmod((c.g - c.b) / d, 6.0);
    } else if (mx == c.g) {
        h = 60.0 * ((c.b - c.r) / d + 2.0);
    } else {
        h = 60.0 * ((c.r - c.g) / d + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

double hsl_lightness(const RgbColor& c) {
    return 0.5 * (std::max({c.r, c.g, c.b}) + std::min({c.r, c.g, c.b}));
}

double delta_e_ciede2000(const LabColor& x, const LabColor& y) {
    constexpr double k25_7 = 6103515625.0;  // 25^7

    const double c1 = std::hypot(x.a, x.b);
    const double c2 = std::hypot(y.a, y.b);
    const double c_bar7 = std::pow(0.5 * (c1 + c2), 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + k25_7)));

    const double a1p = (1.0 + g) * x.a;
    const double a2p = (1.0 + g) * y.a;
    const double c1p = std::hypot(a1p, x.b);
    const double c2p = std::hypot(a2p, y.b);

    auto hue = [](double b, double ap) {
        if (b == 0.0 && ap == 0.0) return 0.0;
        double h = deg(std::atan2(b, ap));
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue(x.b, a1p);
    const double h2p = hue(y.b, a2p);

    const double dl = y.l - x.l;
    const double dc = c2p - c1p;
    const bool achromatic = c1p * c2p == 0.0;

    double dh = 0.0;
    if (!achromatic) {
        dh = h2p - h1p;
        if (dh > 180.0) {
            dh -= 360.0;
        } else if (dh < -180.0) {
            dh += 360.0;
        }
    }
    const double d_hue = 2.0 * std::sqrt(c1p * c2p) * std::sin(rad(dh) / 2.0);

    const double l_bar = 0.5 * (x.l + y.l);
    const double c_bar_p = 0.5 * (c1p + c2p);
    double h_bar;
    if (achromatic) {
        h_bar = h1p + h2p;
    } else if (std::abs(h1p - h2p) <= 180.0) {
        h_bar = 0.5 * (h1p + h2p);
    } else if (h1p + h2p < 360.0) {
        h_bar = 0.5 * (h1p + h2p + 360.0);
    } else {
        h_bar = 0.5 * (h1p + h2p - 360.0);
    }

    const double t = 1.0 - 0.17 * std::cos(rad(h_bar - 30.0)) + 0.24 * std::cos(rad(2.0 * h_bar)) +
                     0.32 * std::cos(rad(3.0 * h_bar + 6.0)) -
                     0.20 * std::cos(rad(4.0 * h_bar - 63.0));
    const double d_theta = 30.0 * std::exp(-std::pow((h_bar - 275.0) / 25.0, 2.0));
    const double c_bar_p7 = std::pow(c_bar_p, 7.0);
    const double r_c = 2.0 * std::sqrt(c_bar_p7 / (c_bar_p7 + k25_7));
    const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
    const double s_l = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    const double s_c = 1.0 + 0.045 * c_bar_p;
    const double s_h = 1.0 + 0.015 * c_bar_p * t;
    const double r_t = -std::sin(rad(2.0 * d_theta)) * r_c;

    const double tl = dl / s_l;
    const double tc = dc / s_c;
    const double th = d_hue / s_h;
    return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + r_t * tc * th));
}

ChannelStats channel_stats(const Raster& img) {
    if (img.empty()) throw Error("empty raster");
    std::vector<LabColor> lab;
    lab.reserve(img.size());
    for (const auto& p : img.pixels()) lab.push_back(rgb_to_lab(p));

    const double n = static_cast<double>(lab.size());
    ChannelStats st;
    for (const auto& c : lab) {
        st.mean[0] += c.l;
        st.mean[1] += c.a;
        st.mean[2] += c.b;
    }
    for (auto& m : st.mean) m /= n;

    std::array<double, 3> var{};
    for (const auto& c : lab) {
        const double d0 = c.l - st.mean[0];
        const double d1 = c.a - st.mean[1];
        const double d2 = c.b - st.mean[2];
        var[0] += d0 * d0;
        var[1] += d1 * d1;
        var[2] += d2 * d2;
    }
    for (int k = 0; k < 3; ++k) st.std[k] = std::sqrt(var[k] / n);
    return st;
}

Raster reinhard_transfer(const Raster& source, const ChannelStats& target_stats,
                         GamutTally& tally) {
    if (source.empty()) throw Error("empty raster");
    // Spreads below this are floating-point residue of a constant channel.
    constexpr double kDegenerateStd = 1e-9;

    const ChannelStats src = channel_stats(source);
    std::array<double, 3> scale{};
    std::array<bool, 3> degenerate{};
    for (int k = 0; k < 3; ++k) {
        degenerate[k] = src.std[k] < kDegenerateStd;
        scale[k] = degenerate[k] ? 0.0 : target_stats.std[k] / src.std[k];
    }
    auto map = [&](int k, double v) {
        return degenerate[k] ? target_stats.mean[k]
                             : (v - src.mean[k]) * scale[k] + target_stats.mean[k];
    };

    Raster out(source.width(), source.height());
    auto dst = out.pixels();
    auto in = source.pixels();
    for (std::size_t i = 0; i < in.size(); ++i) {
        const LabColor lab = rgb_to_lab(in[i]);
        dst[i] = lab_to_rgb({map(0, lab.l), map(1, lab.a), map(2, lab.b)}, tally);
    }
    return out;
}

Raster reinhard_transfer(const Raster& source, const ChannelStats& target_stats) {
    GamutTally ignored;
    return reinhard_transfer(source, target_stats, ignored);
}

std::string to_hex(const RgbColor& c) {
    auto byte = [](double v) {
        return static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
    return buf;
}

RgbColor from_hex(std::string_view hex) {
    if (!hex.empty() && hex.front() == '#') hex.remove_prefix(1);
    if (hex.size() != 6) throw Error("invalid hex color: " + std::string(hex));
    auto nibble = [&](char ch) -> unsigned {
        if (ch >= '0' && ch <= '9') return static_cast<unsigned>(ch - '0');
        if (ch >= 'a' && ch <= 'f') return static_cast<unsigned>(ch - 'a' + 10);
        if (ch >= 'A' && ch <= 'F') return static_cast<unsigned>(ch - 'A' + 10);
        throw Error("invalid hex color: " + std::string(hex));
    };
    auto channel = [&](std::size_t i) {
        return static_cast<double>(nibble(hex[i]) * 16 + nibble(hex[i + 1])) / 255.0;
    };
    return {channel(0), channel(2), channel(4)};
}

}  // namespace craftgen
