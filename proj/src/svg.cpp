#include "folia/svg.hpp"

#include <sstream>

#include "folia/errors.hpp"
#include "folia/flows.hpp"
#include "folia/pointwise.hpp"

namespace folia {

SvgCanvas::SvgCanvas(double x0, double y0, double x1, double y1, int width_px, int height_px)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1), w_(width_px), h_(height_px) {}

double SvgCanvas::px(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
double SvgCanvas::py(double y) const { return (y1_ - y) / (y1_ - y0_) * h_; }

void SvgCanvas::rect(double x0, double y0, double x1, double y1, const std::string& fill) {
    std::ostringstream os;
    os << "<rect x=\"" << px(x0) << "\" y=\"" << py(y1) << "\" width=\"" << (px(x1) - px(x0))
       << "\" height=\"" << (py(y0) - py(y1)) << "\" fill=\"" << fill << "\"/>\n";
    body_ += os.str();
}

void SvgCanvas::polyline(const std::vector<Eigen::Vector2d>& pts, const std::string& stroke,
                         double width) {
    if (pts.size() < 2) return;
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
       << "\" points=\"";
    for (const auto& p : pts) os << px(p[0]) << "," << py(p[1]) << " ";
    os << "\"/>\n";
    body_ += os.str();
}

void SvgCanvas::circle(double x, double y, double radius_px, const std::string& fill) {
    std::ostringstream os;
    os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << radius_px
       << "\" fill=\"" << fill << "\"/>\n";
    body_ += os.str();
}

void SvgCanvas::text(double x, double y, const std::string& s, int size_px) {
    std::ostringstream os;
    os << "<text x=\"" << px(x) << "\" y=\"" << py(y) << "\" font-size=\"" << size_px
       << "\" font-family=\"monospace\">" << s << "</text>\n";
    body_ += os.str();
}

std::string SvgCanvas::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
       << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_ << "</svg>\n";
    return os.str();
}

namespace {

const char* dim_color(int dim) {
    static const char* palette[] = {"#f4f4f4", "#a1d9ef", "#5fb0d8", "#2f7fb8", "#174f8a",
                                    "#0b2d5c", "#071b38"};
    return palette[std::min(dim, 6)];
}

}  // namespace

std::string render_rank_heatmap(const SingularSubalgebroid& B, double lo, double hi, int cells) {
    if (B.ambient().nvars() != 2) throw InputError("heat map rendering needs a 2d base");
    SvgCanvas canvas(lo, lo, hi, hi, 640, 640);
    // rational cell centers keep the dimension computation exact
    Rat rlo = rat(static_cast<long>(lo * 1000), 1000);
    Rat rhi = rat(static_cast<long>(hi * 1000), 1000);
    Rat width = (rhi - rlo) / cells;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            Rat cx = Rat(rlo + width * i + width / 2);
            Rat cy = Rat(rlo + width * j + width / 2);
            int dim = fiber_dimension(B, {cx, cy});
            double cell_x = Rat(rlo + width * i).get_d();
            double cell_y = Rat(rlo + width * j).get_d();
            canvas.rect(cell_x, cell_y, cell_x + width.get_d(), cell_y + width.get_d(),
                        dim_color(dim));
        }
    canvas.text(lo + 0.02 * (hi - lo), hi - 0.04 * (hi - lo), "fiber dimension per cell");
    return canvas.str();
}

std::string render_flow_paths(const SingularSubalgebroid& B, double lo, double hi, int seeds,
                              double time) {
    if (B.ambient().nvars() != 2) throw InputError("flow rendering needs a 2d base");
    SvgCanvas canvas(lo, lo, hi, hi, 640, 640);
    const char* colors[] = {"#b33", "#383", "#339", "#a63", "#636", "#366"};
    for (std::size_t gi = 0; gi < B.generators().size(); ++gi) {
        std::vector<Poly> field = B.ambient().anchor_field(B.generators()[gi]);
        for (int s = 0; s < seeds; ++s) {
            double angle = 2 * M_PI * s / seeds;
            double r = 0.45 * (hi - lo);
            Eigen::VectorXd x0(2);
            x0 << r * std::cos(angle) * 0.7, r * std::sin(angle) * 0.7;
            std::vector<std::pair<double, Eigen::VectorXd>> trace;
            try {
                flow(field, x0, time, {}, &trace);
            } catch (const FlowEscapeError&) {
                // draw the partial trajectory
            }
            std::vector<Eigen::Vector2d> pts;
            for (const auto& [t, p] : trace)
                if (std::abs(p[0]) < 2 * hi && std::abs(p[1]) < 2 * hi)
                    pts.push_back(Eigen::Vector2d(p[0], p[1]));
            canvas.polyline(pts, colors[gi % 6]);
            if (!pts.empty()) canvas.circle(pts.front()[0], pts.front()[1], 2.5, colors[gi % 6]);
        }
    }
    return canvas.str();
}

std::string render_family_trace(const BisectionFamily& family, const Eigen::VectorXd& x0,
                                double lambda_max, int steps) {
    std::vector<Eigen::Vector2d> pts;
    double span = 0.0;
    for (int s = 0; s <= steps; ++s) {
        double l = lambda_max * s / steps;
        Eigen::VectorXd y = family.target_point(l, x0);
        if (y.size() >= 2)
            pts.push_back(Eigen::Vector2d(y[0], y[1]));
        else if (y.size() == 1)
            pts.push_back(Eigen::Vector2d(l, y[0]));
        for (const auto& p : pts) span = std::max({span, std::abs(p[0]), std::abs(p[1])});
    }
    span = std::max(span * 1.2, 1.0);
    SvgCanvas canvas(-span, -span, span, span, 640, 640);
    canvas.polyline(pts, "#b33", 2.0);
    if (!pts.empty()) {
        canvas.circle(pts.front()[0], pts.front()[1], 3.0, "#383");
        canvas.circle(pts.back()[0], pts.back()[1], 3.0, "#339");
    }
    canvas.text(-span * 0.95, span * 0.9, "bisection trace");
    return canvas.str();
}

}  // namespace folia
