#pragma once

namespace fracstep {

/// A time instant stored as origin + left + offset.
///
/// `origin` is the start of a shifted time line (0 for an unshifted run),
/// `left` the local start of the owning cell and `offset` the position inside
/// that cell. Keeping the three parts apart lets callers form differences to
/// nearby onsets without losing the small in-cell offset to rounding of the
/// global time, which matters once cell widths approach the spacing of
/// doubles near the onset.
struct TimePoint {
  double origin = 0.0;
  double left = 0.0;
  double offset = 0.0;

  [[nodiscard]] static constexpr TimePoint global(double t) noexcept { return {0.0, t, 0.0}; }

  [[nodiscard]] constexpr double value() const noexcept { return (origin + left) + offset; }

  /// Elapsed time since `s` (negative before it).
  [[nodiscard]] constexpr double since(double s) const noexcept {
    return ((origin - s) + left) + offset;
  }

  /// True once the instant is at or after `s`. Evaluated as
  /// (s - origin) - left <= offset so that a cell ending exactly at `s`
  /// compares its width against itself.
  [[nodiscard]] constexpr bool reached(double s) const noexcept {
    return (s - origin) - left <= offset;
  }
};

}  // namespace fracstep
