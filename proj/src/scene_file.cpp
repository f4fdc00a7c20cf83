#include "evfi/errors.hpp"
#include "evfi/scene.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace evfi {

namespace {

void write_coeffs(std::ostream& out, const std::vector<double>& c) {
  for (double v : c) out << ' ' << v;
}

std::string shape_text(const Shape& s) {
  std::ostringstream o;
  o << std::setprecision(17);
  switch (s.kind) {
    case ShapeKind::rect:
      o << "rect " << s.size_x << ' ' << s.size_y;
      break;
    case ShapeKind::disk:
      o << "disk " << s.radius;
      break;
    case ShapeKind::gauss:
      o << "gauss " << s.sigma;
      break;
    case ShapeKind::ridge:
      o << "ridge " << s.size_x << ' ' << s.size_y << ' ' << s.ramp;
      break;
    case ShapeKind::wave:
      o << "wave " << s.size_x << ' ' << s.size_y << ' ' << s.ramp;
      break;
  }
  return o.str();
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ArgumentError("scene line " + std::to_string(line) + ": " + msg);
}

double number(std::istringstream& in, std::size_t line, const char* what) {
  double v;
  if (!(in >> v)) fail(line, std::string("expected ") + what);
  return v;
}

Shape parse_shape(std::istringstream& in, std::size_t line) {
  std::string kind;
  in >> kind;
  if (kind == "rect") {
    const double w = number(in, line, "rect width");
    const double h = number(in, line, "rect height");
    return Shape::rect(int(w), int(h));
  }
  if (kind == "disk") return Shape::disk(number(in, line, "disk radius"));
  if (kind == "gauss") return Shape::gauss(number(in, line, "gauss sigma"));
  if (kind == "ridge") {
    const double w = number(in, line, "ridge width");
    const double h = number(in, line, "ridge height");
    const double r = number(in, line, "ridge ramp");
    return Shape::ridge(int(w), int(h), int(r));
  }
  if (kind == "wave") {
    const double w = number(in, line, "wave width");
    const double h = number(in, line, "wave height");
    const double r = number(in, line, "wave half period");
    return Shape::wave(int(w), int(h), int(r));
  }
  fail(line, "unknown shape '" + kind + "'");
}

// Reads "x c0 c1 ... y c0 c1 ..." into a segment.
void parse_coeffs(std::istringstream& in, std::size_t line, Segment& seg) {
  std::string tok;
  std::vector<double>* dst = nullptr;
  while (in >> tok) {
    if (tok == "x") {
      dst = &seg.x;
    } else if (tok == "y") {
      dst = &seg.y;
    } else {
      if (!dst) fail(line, "coefficient before 'x' or 'y'");
      try {
        std::size_t used = 0;
        dst->push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail(line, "bad coefficient '" + tok + "'");
      }
    }
  }
  if (seg.x.empty() || seg.y.empty()) fail(line, "segment needs x and y coefficients");
}

}  // namespace

void write_scene(std::ostream& out, const SceneSpec& scene) {
  out << std::setprecision(17);
  out << "scene 1\n";
  out << "width " << scene.width << "\nheight " << scene.height << "\nbackground " << scene.background << '\n';
  out << "frame_times";
  write_coeffs(out, scene.frame_times);
  out << '\n';
  for (const auto& sp : scene.sprites) {
    out << "sprite " << shape_text(sp.shape) << " intensity " << sp.intensity << '\n';
    for (const auto& seg : sp.trajectory.segments) {
      out << "segment " << seg.t_start << ' ' << seg.t_end << " x";
      write_coeffs(out, seg.x);
      out << " y";
      write_coeffs(out, seg.y);
      out << '\n';
    }
  }
}

SceneSpec read_scene(std::istream& in) {
  SceneSpec scene;
  scene.frame_times.clear();
  std::string raw;
  std::size_t line = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    if (!header) {
      int version = 0;
      if (key != "scene" || !(ls >> version) || version != 1) fail(line, "expected 'scene 1' header");
      header = true;
      continue;
    }
    if (key == "width") {
      scene.width = int(number(ls, line, "width"));
    } else if (key == "height") {
      scene.height = int(number(ls, line, "height"));
    } else if (key == "background") {
      scene.background = number(ls, line, "background");
    } else if (key == "frame_times") {
      double t;
      while (ls >> t) scene.frame_times.push_back(t);
    } else if (key == "sprite") {
      Sprite sp;
      sp.shape = parse_shape(ls, line);
      std::string tag;
      if (!(ls >> tag) || tag != "intensity") fail(line, "expected 'intensity'");
      sp.intensity = number(ls, line, "intensity");
      scene.sprites.push_back(sp);
    } else if (key == "segment") {
      if (scene.sprites.empty()) fail(line, "segment before any sprite");
      Segment seg;
      seg.t_start = number(ls, line, "segment start");
      seg.t_end = number(ls, line, "segment end");
      parse_coeffs(ls, line, seg);
      scene.sprites.back().trajectory.segments.push_back(seg);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  if (!header) fail(line, "empty scene file");
  if (scene.frame_times.empty()) scene.frame_times = {0.0, 1.0};
  scene.validate();
  return scene;
}

SceneSpec load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file " + path);
  return read_scene(in);
}

void save_scene_file(const SceneSpec& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scene file " + path);
  write_scene(out, scene);
  if (!out) throw IoError("failed writing scene file " + path);
}

}  // namespace evfi
