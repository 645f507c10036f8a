#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace folia {

class SingularSubalgebroid;
class BisectionFamily;

/// Minimal SVG canvas over a world rectangle; y is flipped so world-up is screen-up.
class SvgCanvas {
public:
    SvgCanvas(double x0, double y0, double x1, double y1, int width_px, int height_px);

    void rect(double x0, double y0, double x1, double y1, const std::string& fill);
    void polyline(const std::vector<Eigen::Vector2d>& pts, const std::string& stroke,
                  double width = 1.5);
    void circle(double x, double y, double radius_px, const std::string& fill);
    void text(double x, double y, const std::string& s, int size_px = 12);
    std::string str() const;

private:
    double px(double x) const;
    double py(double y) const;
    double x0_, y0_, x1_, y1_;
    int w_, h_;
    std::string body_;
};

/// Fiber-dimension heat map over a rational grid; cells colored by dimension.
std::string render_rank_heatmap(const SingularSubalgebroid& B, double lo, double hi, int cells);

/// Flow trajectories of the generator anchors from a ring of seed points.
std::string render_flow_paths(const SingularSubalgebroid& B, double lo, double hi, int seeds,
                              double time);

/// Trace of lambda -> target of b_lambda(x0) for a 1-parameter bisection family.
std::string render_family_trace(const BisectionFamily& family, const Eigen::VectorXd& x0,
                                double lambda_max, int steps);

}  // namespace folia
