#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "holmes/event.hpp"
#include "holmes/kernels.hpp"

namespace testutil {

inline holmes::Timestamp at(int day, int hour = 0, int minute = 0, int second = 0) {
  using namespace std::chrono;
  return holmes::Timestamp{sys_days{year{2020} / December / 1} + days{day} + hours{hour} +
                           minutes{minute} + seconds{second}};
}

inline holmes::EmailEvent event(std::string id, holmes::Timestamp ts = at(0),
                                std::string src_ip = "1.2.3.4", std::string from = "a@x.com",
                                std::string to = "b@y.com", std::string subject = "hi") {
  holmes::EmailEvent e;
  e.event_id = std::move(id);
  e.timestamp = ts;
  e.src_ip = std::move(src_ip);
  e.src_country = "US";
  e.direction = holmes::Direction::inbound;
  e.mail_from = std::move(from);
  e.mail_to = std::move(to);
  e.header_from = "A";
  e.subject = std::move(subject);
  e.user_agent = "ua";
  return e;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("holmes-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline holmes::PointMatrix random_points(std::mt19937_64& rng, std::size_t n,
                                         std::size_t dim, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  holmes::PointMatrix m(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : m.row(i)) x = g(rng);
  }
  return m;
}

inline std::vector<std::vector<double>> to_rows(const holmes::PointMatrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.emplace_back(m.row(i).begin(), m.row(i).end());
  }
  return rows;
}

}  // namespace testutil
