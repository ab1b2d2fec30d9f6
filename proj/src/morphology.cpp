#include "agglo/morphology.hpp"

#include <stdexcept>

namespace agglo {

ScheduleVariant parse_schedule_variant(std::string_view text) {
  if (text == "count-matched") return ScheduleVariant::kCountMatched;
  if (text == "printed") return ScheduleVariant::kPrinted;
  throw std::invalid_argument("unknown schedule '" + std::string(text) +
                              "' (use printed or count-matched)");
}

std::string_view to_string(ScheduleVariant v) {
  return v == ScheduleVariant::kCountMatched ? "count-matched" : "printed";
}

std::string ThickeningSchedule::descriptor() const {
  std::string out(to_string(variant));
  out += ":n1=" + std::to_string(skip_prefix) + ":";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ',';
    out += steps[i] == StructuringElement::kSquare ? "II" : "I";
  }
  return out;
}

ThickeningSchedule make_schedule(int n2, ScheduleVariant variant, int n1) {
  if (n2 < 1 || n1 < 0 || n1 >= n2)
    throw std::invalid_argument("schedule: need 0 <= n1 < n2, got n1=" + std::to_string(n1) +
                                " n2=" + std::to_string(n2));
  ThickeningSchedule s;
  s.skip_prefix = n1;
  s.variant = variant;
  s.steps.reserve(static_cast<std::size_t>(n2));
  for (int step = 1; step <= n2; ++step) {
    bool square = false;
    if (variant == ScheduleVariant::kCountMatched)
      square = (step - 1) % 3 == 0;
    else
      square = step == 1 || (step >= 5 && (step - 5) % 3 == 0);
    s.steps.push_back(square ? StructuringElement::kSquare : StructuringElement::kCross);
  }
  return s;
}

ThickeningSchedule default_schedule() { return make_schedule(10); }

namespace {

using Word = BinaryImage::Word;

// Row dilated by the 1x3 horizontal segment, clipped to the frame.
void dilate_row_horizontal(const BinaryImage& image, std::span<const Word> src, Word* dst) {
  const int nw = image.words_per_row();
  for (int w = 0; w < nw; ++w) {
    const Word cur = src[w];
    const Word left = w > 0 ? src[w - 1] >> 63 : 0;
    const Word right = w + 1 < nw ? src[w + 1] << 63 : 0;
    dst[w] = (cur | (cur << 1) | left | (cur >> 1) | right) & image.word_mask(w);
  }
}

}  // namespace

BinaryImage dilate(const BinaryImage& image, StructuringElement element) {
  BinaryImage out(image.width(), image.height(), image.pixel_size());
  const int h = image.height();
  const int nw = image.words_per_row();
  if (h == 0) return out;

  if (element == StructuringElement::kCross) {
    for (int y = 0; y < h; ++y) {
      auto dst = out.row(y);
      dilate_row_horizontal(image, image.row(y), dst.data());
      if (y > 0) {
        auto up = image.row(y - 1);
        for (int w = 0; w < nw; ++w) dst[w] |= up[w];
      }
      if (y + 1 < h) {
        auto down = image.row(y + 1);
        for (int w = 0; w < nw; ++w) dst[w] |= down[w];
      }
    }
    return out;
  }

  std::vector<Word> horizontal(static_cast<std::size_t>(nw) * h);
  for (int y = 0; y < h; ++y)
    dilate_row_horizontal(image, image.row(y), horizontal.data() + static_cast<std::size_t>(y) * nw);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (int dy = -1; dy <= 1; ++dy) {
      const int sy = y + dy;
      if (sy < 0 || sy >= h) continue;
      const Word* src = horizontal.data() + static_cast<std::size_t>(sy) * nw;
      for (int w = 0; w < nw; ++w) dst[w] |= src[w];
    }
  }
  return out;
}

EulerTrace thicken_trace(const BinaryImage& image, const ThickeningSchedule& schedule,
                         Connectivity conn, const StepObserver& observer) {
  EulerTrace trace;
  trace.chis.reserve(schedule.steps.size() + 1);
  trace.areas.reserve(schedule.steps.size() + 1);

  BinaryImage current = image;
  auto record = [&](int step) {
    trace.chis.push_back(euler_number(current, conn));
    trace.areas.push_back(current.count_foreground());
    if (observer) observer(step, current);
  };
  record(0);
  for (std::size_t i = 0; i < schedule.steps.size(); ++i) {
    current = dilate(current, schedule.steps[i]);
    record(static_cast<int>(i) + 1);
  }
  return trace;
}

}  // namespace agglo
