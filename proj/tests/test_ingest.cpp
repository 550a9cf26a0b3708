#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "ecfvol/error.hpp"
#include "ecfvol/ingest.hpp"

using namespace ecfvol;

namespace {

constexpr double kDay = 86400.0;

double at(long day, int h, int m, int s) { return day * kDay + h * 3600 + m * 60 + s; }

SessionSpec quarter_hour() {
  SessionSpec spec;
  spec.open_time = 9 * 3600 + 30 * 60;
  spec.close_time = 9 * 3600 + 45 * 60;
  spec.grid_step = 180;
  return spec;
}

TickSeries five_ticks() {
  const long d = parse_date("2024-01-02");
  TickSeries t;
  t.timestamps = {at(d, 9, 29, 0), at(d, 9, 31, 30), at(d, 9, 33, 0), at(d, 9, 37, 10),
                  at(d, 9, 44, 59)};
  t.prices = {100, 101, 102, 99, 100.5};
  return t;
}

}  // namespace

TEST(Dates, ParseDateAndRfc3339) {
  EXPECT_EQ(parse_date("1970-01-01"), 0);
  EXPECT_EQ(parse_date("2024-01-02"), 19724);
  EXPECT_THROW(parse_date("2024-13-01"), DataError);
  EXPECT_THROW(parse_date("20240102"), DataError);
  EXPECT_DOUBLE_EQ(parse_rfc3339("2024-01-02T09:30:00Z"), at(19724, 9, 30, 0));
  EXPECT_DOUBLE_EQ(parse_rfc3339("2024-01-02 09:30:00.25Z"), at(19724, 9, 30, 0) + 0.25);
  EXPECT_DOUBLE_EQ(parse_rfc3339("2024-01-02T09:30:00-05:00"), at(19724, 14, 30, 0));
  EXPECT_DOUBLE_EQ(parse_rfc3339("2024-01-02t09:30:00+01:30"), at(19724, 8, 0, 0));
  EXPECT_THROW(parse_rfc3339("2024-01-02T09:30"), DataError);
}

TEST(Session, Validation) {
  SessionSpec s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(s.points_per_session(), 131);
  EXPECT_DOUBLE_EQ(s.delta_n(), 180.0 / (21 * 23400.0));
  s.grid_step = 7;
  EXPECT_THROW(s.validate(), ParameterError);
  s = SessionSpec{};
  s.close_time = s.open_time;
  EXPECT_THROW(s.validate(), ParameterError);
}

TEST(PreviousTick, FiveTickFixture) {
  const PricePath p = previous_tick_resample(five_ticks(), quarter_hour());
  ASSERT_EQ(p.n(), 5);
  const double expect[] = {100, 102, 102, 99, 99, 100.5};
  for (int i = 0; i <= 5; ++i) EXPECT_DOUBLE_EQ(p.log_prices()[i], std::log(expect[i])) << i;
  EXPECT_DOUBLE_EQ(p.delta_n(), 180.0 / (21 * 900.0));
  ASSERT_EQ(p.session_starts().size(), 1u);
  EXPECT_EQ(p.session_starts()[0], 0);
}

TEST(PreviousTick, ResamplingIsIdempotentOnGridTicks) {
  const PricePath p = previous_tick_resample(five_ticks(), quarter_hour());
  const long d = parse_date("2024-01-02");
  TickSeries grid;
  for (int j = 0; j <= 5; ++j) {
    grid.timestamps.push_back(at(d, 9, 30, 0) + 180.0 * j);
    grid.prices.push_back(std::exp(p.log_prices()[j]));
  }
  const PricePath q = previous_tick_resample(grid, quarter_hour());
  ASSERT_EQ(q.n(), p.n());
  for (int i = 0; i <= p.n(); ++i) EXPECT_NEAR(q.log_prices()[i], p.log_prices()[i], 1e-15);
}

TEST(PreviousTick, SessionsAreStitchedWithoutOvernightReturns) {
  const long d0 = parse_date("2024-01-02");
  TickSeries t;
  const double p0[] = {100, 101, 102}, p1[] = {110, 111, 109}, p2[] = {50, 51, 52};
  for (long k = 0; k < 3; ++k) {
    const double* px = k == 0 ? p0 : k == 1 ? p1 : p2;
    t.timestamps.push_back(at(d0 + k, 9, 30, 0));
    t.prices.push_back(px[0]);
    t.timestamps.push_back(at(d0 + k, 9, 36, 0));
    t.prices.push_back(px[1]);
    t.timestamps.push_back(at(d0 + k, 9, 42, 0));
    t.prices.push_back(px[2]);
  }
  SessionSpec spec = quarter_hour();
  spec.exclusions.insert(d0 + 1);
  const PricePath p = previous_tick_resample(t, spec);
  ASSERT_EQ(p.n(), 10);
  ASSERT_EQ(p.session_starts().size(), 2u);
  EXPECT_EQ(p.session_starts()[1], 5);
  // Returns inside each session are the raw log-price changes.
  EXPECT_NEAR(p.increment(2), std::log(101.0 / 100), 1e-15);
  EXPECT_NEAR(p.increment(6), 0.0, 1e-15);
  EXPECT_NEAR(p.increment(7), std::log(51.0 / 50), 1e-15);
  EXPECT_NEAR(p.increment(9), std::log(52.0 / 51), 1e-15);
  double total = 0;
  for (int i = 1; i <= 10; ++i) total += p.increment(i);
  EXPECT_NEAR(total, std::log(102.0 / 100) + std::log(52.0 / 50), 1e-14);
}

TEST(PreviousTick, LocalOffsetShiftsTheGrid) {
  TickSeries t = five_ticks();
  for (auto& ts : t.timestamps) ts += 5 * 3600;  // same wall-clock times at UTC-5
  SessionSpec spec = quarter_hour();
  spec.utc_offset_seconds = -5 * 3600;
  const PricePath p = previous_tick_resample(t, spec);
  const PricePath q = previous_tick_resample(five_ticks(), quarter_hour());
  ASSERT_EQ(p.n(), q.n());
  for (int i = 0; i <= p.n(); ++i) EXPECT_EQ(p.log_prices()[i], q.log_prices()[i]);
}

TEST(PreviousTick, NoEarlierTickIsAnError) {
  TickSeries t = five_ticks();
  t.timestamps.erase(t.timestamps.begin());
  t.prices.erase(t.prices.begin());
  EXPECT_THROW(previous_tick_resample(t, quarter_hour()), DataError);
}

TEST(LoadTicks, ParsesEpochAndRfc3339WithHeader) {
  std::istringstream in(
      "timestamp,price\n"
      "1704187800,100.5\n"
      "2024-01-02T09:31:00Z,101\r\n"
      "\n"
      "1704187900.5, 99.25\n");
  const TickSeries t = load_ticks(in, "XYZ");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.symbol, "XYZ");
  EXPECT_DOUBLE_EQ(t.timestamps[1], at(19724, 9, 31, 0));
  EXPECT_DOUBLE_EQ(t.timestamps[2], 1704187900.5);
  EXPECT_DOUBLE_EQ(t.prices[2], 99.25);
}

TEST(LoadTicks, RejectsBadInput) {
  auto load = [](const std::string& s) {
    std::istringstream in(s);
    return load_ticks(in);
  };
  EXPECT_THROW(load(""), DataError);
  EXPECT_THROW(load("timestamp,price\n"), DataError);
  EXPECT_THROW(load("1,100\n2,-1\n"), DataError);
  EXPECT_THROW(load("1,100\n1,101\n"), DataError);
  EXPECT_THROW(load("2,100\n1,101\n"), DataError);
  try {
    load("1,100\n2,abc\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(LoadTicks, MillionRowsPerformanceSmoke) {
  std::string text;
  text.reserve(30u << 20);
  const long d = parse_date("2024-01-02");
  for (int i = 0; i < 1000000; ++i) {
    text += std::to_string(at(d, 9, 30, 0) + i * 0.0234);
    text += ',';
    text += std::to_string(100.0 + (i % 100) * 0.01);
    text += '\n';
  }
  std::istringstream in(text);
  const auto t0 = std::chrono::steady_clock::now();
  const TickSeries t = load_ticks(in);
  const PricePath p = previous_tick_resample(t, SessionSpec{});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(t.size(), 1000000u);
  EXPECT_EQ(p.n(), 130);
  EXPECT_LT(secs, 5.0);
}
