#include "ecfvol/ingest.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <string_view>

#include "ecfvol/error.hpp"

namespace ecfvol {
namespace {

constexpr long kSecondsPerDay = 86400;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end && std::isfinite(out);
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

long days_from_civil(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw DataError("invalid calendar date");
  return sys_days{ymd}.time_since_epoch().count();
}

bool try_parse_timestamp(std::string_view s, double& out) {
  if (parse_double(s, out)) return true;
  try {
    out = parse_rfc3339(std::string(s));
    return true;
  } catch (const DataError&) {
    return false;
  }
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void TickSeries::validate() const {
  if (timestamps.size() != prices.size())
    throw DataError("tick series: timestamp and price counts differ");
  if (timestamps.empty()) throw DataError("tick series is empty");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
      throw DataError("tick " + std::to_string(i) + ": price must be positive");
    if (!std::isfinite(timestamps[i]))
      throw DataError("tick " + std::to_string(i) + ": timestamp not finite");
    if (i > 0 && !(timestamps[i] > timestamps[i - 1]))
      throw DataError("tick " + std::to_string(i) + ": timestamps must strictly increase");
  }
}

void SessionSpec::validate() const {
  if (open_time < 0 || close_time > kSecondsPerDay || !(open_time < close_time))
    throw ParameterError("session: need 0 <= open < close <= 86400");
  if (grid_step <= 0 || (close_time - open_time) % grid_step != 0)
    throw ParameterError("session: grid_step must divide the session length");
  if (sessions_per_unit <= 0) throw ParameterError("session: sessions_per_unit must be positive");
}

double SessionSpec::delta_n() const {
  return static_cast<double>(grid_step) /
         (static_cast<double>(sessions_per_unit) * static_cast<double>(close_time - open_time));
}

long parse_date(const std::string& text) {
  const std::string_view s = trim(text);
  int y = 0;
  unsigned m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !parse_int(s.substr(0, 4), y) ||
      !parse_int(s.substr(5, 2), m) || !parse_int(s.substr(8, 2), d))
    throw DataError("bad date '" + text + "', expected YYYY-MM-DD");
  return days_from_civil(y, m, d);
}

double parse_rfc3339(const std::string& text) {
  const std::string_view s = trim(text);
  auto fail = [&]() -> double { throw DataError("bad RFC-3339 timestamp '" + text + "'"); };
  if (s.size() < 20 || (s[10] != 'T' && s[10] != 't' && s[10] != ' ')) return fail();
  long days = 0;
  try {
    days = parse_date(std::string(s.substr(0, 10)));
  } catch (const DataError&) {
    return fail();
  }
  int hh = 0, mm = 0, ss = 0;
  if (s[13] != ':' || s[16] != ':' || !parse_int(s.substr(11, 2), hh) ||
      !parse_int(s.substr(14, 2), mm) || !parse_int(s.substr(17, 2), ss) || hh > 23 || mm > 59 ||
      ss > 60)
    return fail();
  std::size_t pos = 19;
  double frac = 0.0;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t end = pos + 1;
    while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
    if (end == pos + 1 || !parse_double(s.substr(pos, end - pos), frac)) return fail();
    pos = end;
  }
  long offset = 0;
  const std::string_view zone = s.substr(pos);
  if (zone == "Z" || zone == "z") {
    offset = 0;
  } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
    int oh = 0, om = 0;
    if (!parse_int(zone.substr(1, 2), oh) || !parse_int(zone.substr(4, 2), om)) return fail();
    offset = (oh * 3600L + om * 60L) * (zone[0] == '-' ? -1 : 1);
  } else {
    return fail();
  }
  const long secs = days * kSecondsPerDay + hh * 3600L + mm * 60L + ss - offset;
  return static_cast<double>(secs) + frac;
}

TickSeries load_ticks(std::istream& in, std::string symbol) {
  TickSeries out;
  out.symbol = std::move(symbol);
  std::string line;
  long line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    double ts = 0.0, px = 0.0;
    const bool ok = comma != std::string_view::npos &&
                    try_parse_timestamp(trim(row.substr(0, comma)), ts) &&
                    parse_double(trim(row.substr(comma + 1)), px);
    if (!ok) {
      if (first_content) {
        first_content = false;  // header row
        continue;
      }
      throw DataError("line " + std::to_string(line_no) + ": malformed row");
    }
    first_content = false;
    if (!(px > 0.0))
      throw DataError("line " + std::to_string(line_no) + ": price must be positive");
    if (!out.timestamps.empty() && !(ts > out.timestamps.back()))
      throw DataError("line " + std::to_string(line_no) + ": timestamps must strictly increase");
    out.timestamps.push_back(ts);
    out.prices.push_back(px);
  }
  if (out.timestamps.empty()) throw DataError("tick series is empty");
  return out;
}

PricePath previous_tick_resample(const TickSeries& ticks, const SessionSpec& spec) {
  ticks.validate();
  spec.validate();

  // Candidate session dates: local dates with at least one tick at or before close.
  std::set<long> dates;
  for (double ts : ticks.timestamps) {
    const double local = ts + spec.utc_offset_seconds;
    const long day = floor_div(static_cast<long>(std::floor(local)), kSecondsPerDay);
    const double tod = local - static_cast<double>(day) * kSecondsPerDay;
    if (tod <= spec.close_time && !spec.exclusions.count(day)) dates.insert(day);
  }
  if (dates.empty()) throw DataError("no trading session contains ticks");

  // Each later session is shifted so that it starts where the previous one
  // ended, which removes the overnight return.
  const int per_session = spec.points_per_session();
  std::vector<double> levels;
  levels.reserve(dates.size() * static_cast<std::size_t>(per_session - 1) + 1);
  std::vector<int> starts;
  std::size_t cursor = 0;  // one past the last tick with timestamp <= current grid time

  for (long day : dates) {
    double shift = 0.0;
    for (int j = 0; j < per_session; ++j) {
      const double grid = static_cast<double>(day) * kSecondsPerDay + spec.open_time +
                          static_cast<double>(j) * spec.grid_step - spec.utc_offset_seconds;
      while (cursor < ticks.size() && ticks.timestamps[cursor] <= grid) ++cursor;
      if (cursor == 0) throw DataError("no tick at or before the first session grid point");
      const double x = std::log(ticks.prices[cursor - 1]);
      if (j == 0) {
        if (levels.empty()) {
          levels.push_back(x);
        } else {
          shift = levels.back() - x;
        }
        starts.push_back(static_cast<int>(levels.size()) - 1);
      } else {
        levels.push_back(x + shift);
      }
    }
  }

  PricePath path(std::move(levels), spec.delta_n());
  path.set_session_starts(std::move(starts));
  return path;
}

}  // namespace ecfvol
