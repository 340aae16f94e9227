#include "trimark/pipeline.hpp"

#include "trimark/error.hpp"

namespace trimark {

void validate(const PipelineConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  require(!cfg.threshold || (*cfg.threshold >= 0 && *cfg.threshold <= 255), "threshold must be in 0..255");
  require(cfg.connectivity == Connectivity::Four || cfg.connectivity == Connectivity::Eight,
          "connectivity must be 4 or 8");
  require(cfg.min_area >= 1, "min_area must be positive");
  require(cfg.max_area == 0 || cfg.max_area >= cfg.min_area, "max_area must be >= min_area");
  require(cfg.harris.window_sigma > 0.0, "window sigma must be positive");
  require(cfg.nms_radius >= 1, "nms radius must be >= 1");
  require(cfg.grid >= 4, "grid must be >= 4");
  require(cfg.rectify_size >= 4 * cfg.grid, "rectify size must give at least 4 px per cell");
  require(cfg.tau >= 0, "tau must be non-negative");
  require(cfg.max_coast >= 0, "max_coast must be non-negative");
  require(cfg.marker_side > 0.0, "marker side must be positive");
  require(cfg.hull_tolerance >= 0.0, "hull tolerance must be non-negative");
  validate(cfg.anchor);
}

DetectionRun detect_markers(const GrayImage& img, const std::vector<MarkerTemplate>& library,
                            const PipelineConfig& cfg) {
  validate(cfg);
  DetectionRun run;
  if (img.width < 3 || img.height < 3) return run;

  run.threshold_used = cfg.threshold ? *cfg.threshold : otsu_threshold(img).threshold;
  const BinaryImage bin = threshold(img, run.threshold_used);
  const LabelMap labels = label_components(bin, 0, cfg.connectivity);
  if (labels.components.empty()) return run;

  const CornernessMap response = harris_response(img, cfg.harris);
  const std::vector<Corner> corners = local_maxima(response, cfg.nms_radius, cfg.min_response);
  run.corner_count = corners.size();

  QuadParams qp;
  qp.min_area = cfg.min_area;
  qp.max_area = cfg.max_area > 0 ? cfg.max_area : img.width * img.height / 4;
  qp.hull_tolerance = cfg.hull_tolerance;
  QuadExtraction quads = extract_quads(labels, corners, qp);
  run.skipped = std::move(quads.skipped);
  run.candidate_count = quads.quads.size();

  for (Quad q : quads.quads) {
    if (cfg.refine_corners) {
      for (auto& v : q.vertices) v = refine_corner(img, v, cfg.refine);
      if (!order_quad(q.vertices)) {
        run.skipped.push_back({q.component_label, "refined corners do not form a convex quad"});
        continue;
      }
    }
    const GrayImage rect = rectify(img, q, cfg.rectify_size);
    const MarkerCode code = decode_code(rect, cfg.grid);
    if (library.empty()) continue;
    if (auto m = match_template(code, library, cfg.tau)) {
      run.detections.push_back({q, *m});
    } else {
      run.skipped.push_back({q.component_label, "code matches no template"});
    }
  }
  return run;
}

}  // namespace trimark
