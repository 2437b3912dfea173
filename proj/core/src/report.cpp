// Copyright 2026 The xami-tools Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xami/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "xami/coco.hpp"
#include "xami/error.hpp"
#include "xami/parallel.hpp"
#include "xami/svg.hpp"

namespace xami {
namespace {

struct ImageLosses {
  std::array<LossSummary, kNumClasses> sums{};
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v, int digits = 4) { return v ? fmt(*v, digits) : ""; }

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

void finish(LossSummary& s) {
  if (s.pairs == 0) return;
  const double n = static_cast<double>(s.pairs);
  s.focal /= n;
  s.dice /= n;
  s.combined /= n;
}

}  // namespace

MetricsReport build_report(const Dataset& groundtruth, const Dataset& predictions,
                           std::span<const MatchResult> matches, const ReportOptions& options) {
  MetricsReport r;
  r.options = options;
  r.images = groundtruth.images().size();
  r.groundtruth_instances = groundtruth.annotations().size();
  r.predicted_instances = predictions.annotations().size();

  std::unordered_map<std::int64_t, std::size_t> seen;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const auto& m = matches[i];
    if (!groundtruth.find_image(m.image_id))
      throw InvalidArgument("build_report: match record for unknown image " + std::to_string(m.image_id));
    if (!seen.emplace(m.image_id, i).second)
      throw InvalidArgument("build_report: duplicate match record for image " + std::to_string(m.image_id));
    const auto n_gt = groundtruth.annotations_of(m.image_id).size();
    const auto n_pred = predictions.annotations_of(m.image_id).size();
    bool ok = m.pairs.size() + m.false_positives.size() == n_pred &&
              m.pairs.size() + m.false_negatives.size() == n_gt;
    for (const auto& p : m.pairs) ok = ok && p.pred < n_pred && p.gt < n_gt;
    for (auto f : m.false_positives) ok = ok && f < n_pred;
    for (auto f : m.false_negatives) ok = ok && f < n_gt;
    if (!ok)
      throw InvalidArgument("build_report: match record for image " + std::to_string(m.image_id) +
                            " does not fit its " + std::to_string(n_pred) + " predictions / " +
                            std::to_string(n_gt) + " ground truths");
  }
  for (const auto& p : predictions.annotations())
    if (!seen.contains(p.image_id))
      throw InvalidArgument("build_report: prediction " + std::to_string(p.id) + " on image " +
                            std::to_string(p.image_id) + " has no match record");
  for (const auto& g : groundtruth.annotations())
    if (!seen.contains(g.image_id))
      throw InvalidArgument("build_report: image " + std::to_string(g.image_id) + " has no match record");

  // Ground-truth image order for per-image rows.
  std::vector<const MatchResult*> ordered;
  for (const auto& img : groundtruth.images()) {
    if (auto it = seen.find(img.id); it != seen.end()) ordered.push_back(&matches[it->second]);
  }

  std::vector<ImageLosses> losses(options.losses ? ordered.size() : 0);
  std::vector<ConfusionCounts> counts(ordered.size());
  parallel_for(ordered.size(), options.jobs, [&](std::size_t i) {
    const MatchResult& m = *ordered[i];
    std::vector<Annotation> gts, preds;
    for (auto k : groundtruth.annotations_of(m.image_id)) gts.push_back(groundtruth.annotations()[k]);
    for (auto k : predictions.annotations_of(m.image_id)) preds.push_back(predictions.annotations()[k]);
    counts[i] = count_matches(m, preds, gts);
    if (!options.losses) return;
    for (const auto& p : m.pairs) {
      const PixelConfusion pc = pixel_confusion(preds[p.pred].mask.to_rle(), gts[p.gt].mask.to_rle());
      const double focal = focal_loss_binary(pc);
      const double dice = dice_loss_binary(pc);
      auto& s = losses[i].sums[class_index(gts[p.gt].cls)];
      ++s.pairs;
      s.focal += focal;
      s.dice += dice;
      s.combined += weighted_loss(focal, dice);
    }
  });

  for (std::size_t i = 0; i < ordered.size(); ++i) {
    r.counts += counts[i];
    r.image_ids.push_back(ordered[i]->image_id);
    r.image_counts.push_back(counts[i].overall());
    if (!options.losses) continue;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const auto& s = losses[i].sums[c];
      for (auto* dst : {&r.class_losses[c], &r.overall_loss}) {
        dst->pairs += s.pairs;
        dst->focal += s.focal;
        dst->dice += s.dice;
        dst->combined += s.combined;
      }
    }
  }
  for (auto& s : r.class_losses) finish(s);
  finish(r.overall_loss);

  double p_sum = 0.0, r_sum = 0.0;
  int p_n = 0, r_n = 0;
  for (ArtefactClass c : kAllClasses) {
    const auto pr = precision_recall(r.counts[c]);
    r.per_class[class_index(c)] = pr;
    if (pr.precision) {
      p_sum += *pr.precision;
      ++p_n;
    }
    if (pr.recall) {
      r_sum += *pr.recall;
      ++r_n;
    }
  }
  r.overall_micro = precision_recall(r.counts.overall());
  if (p_n) r.overall_macro.precision = p_sum / p_n;
  if (r_n) r.overall_macro.recall = r_sum / r_n;

  std::vector<MatchResult> in_order;
  in_order.reserve(ordered.size());
  bool any_pair = false;
  for (const auto* m : ordered) {
    in_order.push_back(*m);
    any_pair = any_pair || !m->pairs.empty();
  }
  if (any_pair) r.iou = iou_distribution(in_order);
  return r;
}

std::string report_csv(const MetricsReport& r) {
  std::ostringstream os;
  const std::string tail = "," + fmt(r.options.iou_threshold, 2) + "," + (r.options.class_aware ? "true" : "false");
  os << "category,precision,recall,tp,fp,fn,iou_threshold,class_aware\n";
  auto row = [&](const std::string& name, const PrecisionRecall& pr, const Counts& c) {
    os << name << ',' << opt_fmt(pr.precision) << ',' << opt_fmt(pr.recall) << ',' << c.tp << ',' << c.fp << ','
       << c.fn << tail << '\n';
  };
  const Counts overall = r.counts.overall();
  row("Overall", r.overall_micro, overall);
  for (ArtefactClass c : kAllClasses) row(std::string(class_name(c)), r.per_class[class_index(c)], r.counts[c]);
  row("Overall (macro)", r.overall_macro, overall);
  return os.str();
}

std::string report_json(const MetricsReport& r) {
  using nlohmann::ordered_json;
  auto counts_json = [](const Counts& c) { return ordered_json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}}; };
  auto pr_json = [](const PrecisionRecall& pr) {
    return ordered_json{{"precision", opt_json(pr.precision)}, {"recall", opt_json(pr.recall)}};
  };
  auto loss_json = [](const LossSummary& s) {
    return ordered_json{{"pairs", s.pairs}, {"focal", s.focal}, {"dice", s.dice}, {"combined", s.combined}};
  };

  ordered_json doc;
  doc["settings"] = {{"iou_threshold", r.options.iou_threshold},
                     {"class_aware", r.options.class_aware},
                     {"fusion", r.options.fusion},
                     {"focal_gamma", kFocalGamma},
                     {"focal_alpha", kFocalAlpha},
                     {"focal_weight", kFocalWeight},
                     {"dice_weight", kDiceWeight}};
  doc["images"] = r.images;
  doc["groundtruth_instances"] = r.groundtruth_instances;
  doc["predicted_instances"] = r.predicted_instances;

  ordered_json overall = pr_json(r.overall_micro);
  overall["counts"] = counts_json(r.counts.overall());
  doc["overall"] = std::move(overall);
  doc["overall_macro"] = pr_json(r.overall_macro);
  ordered_json classes = ordered_json::array();
  for (ArtefactClass c : kAllClasses) {
    ordered_json row = pr_json(r.per_class[class_index(c)]);
    row = ordered_json{{"class", std::string(class_name(c))}, {"precision", row["precision"]}, {"recall", row["recall"]}};
    row["counts"] = counts_json(r.counts[c]);
    if (r.options.losses) row["losses"] = loss_json(r.class_losses[class_index(c)]);
    classes.push_back(std::move(row));
  }
  doc["classes"] = std::move(classes);

  if (r.iou) {
    doc["iou"] = {{"pairs", r.iou->samples.size()},
                  {"images", r.iou->per_image_means.size()},
                  {"mean", r.iou->mean},
                  {"std", r.iou->std},
                  {"std_kind", "population"},
                  {"per_image_mean_rule", "sum of pair IoUs / (pairs + FP + FN)"}};
  } else {
    doc["iou"] = nullptr;
  }
  if (r.options.losses) doc["losses"] = loss_json(r.overall_loss);
  return doc.dump(2) + "\n";
}

std::string iou_cdf_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "iou,cumulative\n";
  if (r.iou)
    for (std::size_t i = 0; i < r.iou->samples.size(); ++i)
      os << fmt(r.iou->samples[i], 6) << ',' << fmt(r.iou->cumulative[i], 6) << '\n';
  return os.str();
}

std::string per_image_iou_csv(const MetricsReport& r, const Dataset& groundtruth) {
  std::ostringstream os;
  os << "image_id,file_name,mean_iou,tp,fp,fn\n";
  std::unordered_map<std::int64_t, double> means;
  if (r.iou)
    for (std::size_t i = 0; i < r.iou->image_ids.size(); ++i) means[r.iou->image_ids[i]] = r.iou->per_image_means[i];
  for (std::size_t i = 0; i < r.image_ids.size(); ++i) {
    const auto id = r.image_ids[i];
    const ImageRecord* img = groundtruth.find_image(id);
    const Counts& c = r.image_counts[i];
    os << id << ',' << (img ? img->file_name : "") << ',';
    if (auto it = means.find(id); it != means.end())
      os << fmt(it->second, 6);
    else if (c.tp + c.fp + c.fn > 0)
      os << fmt(0.0, 6);
    os << ',' << c.tp << ',' << c.fp << ',' << c.fn << '\n';
  }
  return os.str();
}

std::string iou_cdf_svg(const MetricsReport& r) {
  svg::Axes axes{"Cumulative distribution of matched IoU", "IoU", "fraction of pairs", 0.0, 1.0, 0.0, 1.0};
  std::vector<svg::Series> series;
  if (r.iou) {
    char label[64];
    std::snprintf(label, sizeof label, "all (n=%zu)", r.iou->samples.size());
    series.push_back({label, "#1f77b4", r.iou->samples, r.iou->cumulative});
  }
  return svg::step_plot(axes, series);
}

std::string format_report_table(const MetricsReport& r) {
  std::ostringstream os;
  char line[160];
  auto cell = [](const std::optional<double>& v) {
    char b[16];
    if (v)
      std::snprintf(b, sizeof b, "%6.1f", *v);
    else
      std::snprintf(b, sizeof b, "%6s", "n/a");
    return std::string(b);
  };
  os << "Category         Precision  Recall     TP     FP     FN\n";
  auto row = [&](const std::string& name, const PrecisionRecall& pr, const Counts& c) {
    std::snprintf(line, sizeof line, "%-16s %9s  %6s  %5llu  %5llu  %5llu\n", name.c_str(), cell(pr.precision).c_str(),
                  cell(pr.recall).c_str(), static_cast<unsigned long long>(c.tp),
                  static_cast<unsigned long long>(c.fp), static_cast<unsigned long long>(c.fn));
    os << line;
  };
  row("Overall", r.overall_micro, r.counts.overall());
  for (ArtefactClass c : kAllClasses) row(std::string(class_name(c)), r.per_class[class_index(c)], r.counts[c]);
  row("Overall (macro)", r.overall_macro, r.counts.overall());
  if (r.iou) {
    std::snprintf(line, sizeof line, "mean IoU per image: %.3f +/- %.3f (population std, %zu images)\n", r.iou->mean,
                  r.iou->std, r.iou->per_image_means.size());
    os << line;
  } else {
    os << "mean IoU per image: n/a (no matched pairs)\n";
  }
  std::snprintf(line, sizeof line, "settings: iou_threshold=%.2f class_aware=%s fusion=%s\n", r.options.iou_threshold,
                r.options.class_aware ? "true" : "false", r.options.fusion ? "on" : "off");
  os << line;
  return os.str();
}

void write_report_files(const MetricsReport& r, const Dataset& groundtruth, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "report.csv", report_csv(r));
  write_text_file(dir / "report.json", report_json(r));
  write_text_file(dir / "iou_cdf.csv", iou_cdf_csv(r));
  write_text_file(dir / "per_image_iou.csv", per_image_iou_csv(r, groundtruth));
  if (r.options.plots) write_text_file(dir / "iou_cdf.svg", iou_cdf_svg(r));
}

}  // namespace xami
