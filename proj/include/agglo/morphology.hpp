#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "agglo/binary_image.hpp"
#include "agglo/topology.hpp"

namespace agglo {

enum class StructuringElement : std::uint8_t {
  kCross,   // type I: center + 4-neighbours
  kSquare,  // type II: 3x3 block
};

/// Which element sequence a schedule follows.
///  - kCountMatched: square at steps 1, 4, 7, ... (reproduces the digital
///    disk pixel counts 1, 9, 21, 37, 69, 97, 129, 185, 229, 277);
///  - kPrinted: square at steps 1, 5, 8, 11, ...
enum class ScheduleVariant : std::uint8_t { kCountMatched, kPrinted };

ScheduleVariant parse_schedule_variant(std::string_view text);  // "count-matched" | "printed"
std::string_view to_string(ScheduleVariant v);

struct ThickeningSchedule {
  std::vector<StructuringElement> steps;
  int skip_prefix = 1;  // n1
  ScheduleVariant variant = ScheduleVariant::kCountMatched;

  int length() const { return static_cast<int>(steps.size()); }  // n2
  std::string descriptor() const;  // e.g. "count-matched:n1=1:IIIIIIIIII"
};

/// n2 steps of the chosen variant; requires 0 <= n1 < n2.
ThickeningSchedule make_schedule(int n2, ScheduleVariant variant = ScheduleVariant::kCountMatched,
                                 int n1 = 1);
/// Ten count-matched steps with n1 = 1.
ThickeningSchedule default_schedule();

/// Minkowski dilation by the element, clipped at the frame.
BinaryImage dilate(const BinaryImage& image, StructuringElement element);

/// Euler numbers and foreground areas of M(0), M(1), ..., M(n2).
struct EulerTrace {
  std::vector<std::int64_t> chis;
  std::vector<std::size_t> areas;
};

/// Optional hook invoked with (step index, M(step)) for step = 0..n2.
using StepObserver = std::function<void(int, const BinaryImage&)>;

EulerTrace thicken_trace(const BinaryImage& image, const ThickeningSchedule& schedule,
                         Connectivity conn = Connectivity::k8_4,
                         const StepObserver& observer = {});

}  // namespace agglo
