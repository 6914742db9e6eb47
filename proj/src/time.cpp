#include "svaa/time.hpp"

#include <cstdio>

#include "svaa/error.hpp"

namespace svaa {
namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  int digits(std::size_t count) {
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      char c = peek();
      if (c < '0' || c > '9') fail();
      value = value * 10 + (c - '0');
      ++pos_;
    }
    return value;
  }

  void expect(char c) {
    if (peek() != c) fail();
    ++pos_;
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail() const {
    throw Error(ErrorCode::InvalidTimestamp, "cannot parse '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

sys_days read_date(Cursor& in) {
  int y = in.digits(4);
  in.expect('-');
  int m = in.digits(2);
  in.expect('-');
  int d = in.digits(2);
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) in.fail();
  return sys_days{ymd};
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  Cursor in(text);
  sys_days date = read_date(in);
  if (!in.accept('T') && !in.accept('t') && !in.accept(' ')) in.fail();
  int hh = in.digits(2);
  in.expect(':');
  int mm = in.digits(2);
  in.expect(':');
  int ss = in.digits(2);
  // Leap seconds are not representable in sys_time.
  if (hh > 23 || mm > 59 || ss > 59) in.fail();

  std::int64_t frac_us = 0;
  if (in.accept('.')) {
    int n = 0;
    while (in.peek() >= '0' && in.peek() <= '9') {
      if (n == 6) in.fail();
      frac_us = frac_us * 10 + in.digits(1);
      ++n;
    }
    if (n == 0) in.fail();
    for (; n < 6; ++n) frac_us *= 10;
  }

  minutes offset{0};
  if (in.accept('Z') || in.accept('z')) {
  } else if (in.peek() == '+' || in.peek() == '-') {
    bool negative = in.peek() == '-';
    in.accept(in.peek());
    int oh = in.digits(2);
    in.expect(':');
    int om = in.digits(2);
    if (oh > 23 || om > 59) in.fail();
    offset = minutes{oh * 60 + om};
    if (negative) offset = -offset;
  } else {
    in.fail();
  }
  if (!in.done()) in.fail();

  return Timestamp{date} + hours{hh} + minutes{mm} + seconds{ss} + Micros{frac_us} - offset;
}

std::string format_timestamp(Timestamp t) {
  sys_days date = floor<days>(t);
  year_month_day ymd{date};
  hh_mm_ss<Micros> tod{t - date};
  char buf[48];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                        static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                        static_cast<int>(tod.seconds().count()));
  std::string out(buf, n);
  if (auto us = tod.subseconds().count(); us != 0) {
    std::snprintf(buf, sizeof buf, ".%06lld", static_cast<long long>(us));
    out += buf;
  }
  out += 'Z';
  return out;
}

sys_days parse_date(std::string_view text) {
  Cursor in(text);
  sys_days date = read_date(in);
  if (!in.done()) in.fail();
  return date;
}

std::string format_date(sys_days d) {
  year_month_day ymd{d};
  char buf[16];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return std::string(buf, n);
}

Timestamp align_down(Timestamp t, Micros step) {
  if (step.count() <= 0) throw Error(ErrorCode::InvalidArgument, "alignment step must be positive");
  std::int64_t us = t.time_since_epoch().count();
  std::int64_t q = us / step.count();
  if (us % step.count() < 0) --q;
  return Timestamp{Micros{q * step.count()}};
}

}  // namespace svaa
