#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "ecfvol/price_path.hpp"

namespace ecfvol {

/// Trades in time order. Timestamps are seconds since the Unix epoch.
struct TickSeries {
  std::string symbol;
  std::vector<double> timestamps;
  std::vector<double> prices;

  std::size_t size() const noexcept { return timestamps.size(); }
  /// Throws DataError unless timestamps strictly increase and prices are positive.
  void validate() const;
};

/// Trading-session grid. Times of day are seconds after local midnight, where
/// local time = epoch + utc_offset_seconds.
struct SessionSpec {
  int open_time = 9 * 3600 + 30 * 60;
  int close_time = 16 * 3600;
  int grid_step = 180;
  int utc_offset_seconds = 0;
  /// Dates to skip (half days), as days since 1970-01-01.
  std::set<long> exclusions;
  /// Sessions per unit of time: one month = 21 sessions.
  int sessions_per_unit = 21;

  void validate() const;
  int points_per_session() const { return (close_time - open_time) / grid_step + 1; }
  /// Grid step in units of T.
  double delta_n() const;
};

/// Parses "YYYY-MM-DD" into days since 1970-01-01.
long parse_date(const std::string& text);
/// Parses an RFC-3339 timestamp ("2018-01-02T09:30:00Z", offsets and fractions allowed)
/// into epoch seconds.
double parse_rfc3339(const std::string& text);

/// Reads "timestamp,price" rows (optional header). Timestamps are epoch seconds
/// or RFC-3339. Throws DataError naming the line on malformed rows, non-positive
/// prices and out-of-order timestamps; an empty input is also an error.
TickSeries load_ticks(std::istream& in, std::string symbol = {});

/// Previous-tick sampling on each session grid (open and close both included).
///
/// A session is any non-excluded local date carrying at least one tick at or
/// before its close. The grid price is the last tick with timestamp <= grid
/// time, which may come from an earlier date. Returns that span a session
/// boundary are dropped; the remaining increments are stitched into a single
/// equispaced PricePath whose session_starts() marks the first return of each
/// session.
PricePath previous_tick_resample(const TickSeries& ticks, const SessionSpec& spec);

}  // namespace ecfvol
