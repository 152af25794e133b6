#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lamarck/simulator.hpp"

namespace lamarck {

void write_trajectory(std::ostream& out, const Trajectory& t) {
  out << "# modules=" << t.module_count << " terminated_early=" << (t.terminated_early ? 1 : 0) << '\n';
  out << "# time\tx\ty\tz\tqw\tqx\tqy\tqz\tcontacts\n";
  out << std::setprecision(17);
  for (const auto& f : t.frames) {
    const auto& q = f.orientation;
    out << f.time << '\t' << f.position.x() << '\t' << f.position.y() << '\t' << f.position.z() << '\t' << q.w()
        << '\t' << q.x() << '\t' << q.y() << '\t' << q.z() << '\t' << f.contacts << '\n';
  }
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      int modules = 0, early = 0;
      if (std::sscanf(line.c_str(), "# modules=%d terminated_early=%d", &modules, &early) == 2) {
        t.module_count = modules;
        t.terminated_early = early != 0;
      }
      continue;
    }
    std::istringstream row(line);
    Frame f;
    double qw, qx, qy, qz;
    if (!(row >> f.time >> f.position.x() >> f.position.y() >> f.position.z() >> qw >> qx >> qy >> qz >> f.contacts)) {
      throw std::runtime_error("malformed trajectory row: " + line);
    }
    f.orientation = Eigen::Quaterniond(qw, qx, qy, qz);
    t.frames.push_back(std::move(f));
  }
  return t;
}

}  // namespace lamarck
