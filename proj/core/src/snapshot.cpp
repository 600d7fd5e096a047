#include "chemoctrl/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chemoctrl/errors.hpp"

namespace chemoctrl {

namespace {

constexpr const char* kMagic = "CHEMOCTRL-FIELD 1";

void put_le64(std::uint64_t bits, unsigned char out[8]) {
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(bits >> (8 * i));
}

std::uint64_t get_le64(const unsigned char in[8]) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return bits;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_header_line(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line))
        throw SnapshotError("snapshot '" + path + "': truncated header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

void write_snapshot(const Snapshot& snap, const std::string& path) {
    if (snap.dims.empty() || snap.dims.size() != snap.spacing.size())
        throw SnapshotError("snapshot: dims and spacing must be nonempty and matched");
    std::int64_t cells = 1;
    for (std::int64_t n : snap.dims) {
        if (n < 1) throw SnapshotError("snapshot: dims must be positive");
        cells *= n;
    }
    if (static_cast<std::int64_t>(snap.values.size()) != cells)
        throw SnapshotError("snapshot: payload length does not match dims");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw SnapshotError("snapshot: cannot open '" + path + "' for writing");

    std::ostringstream header;
    header << kMagic << "\n";
    header << "dims";
    for (std::int64_t n : snap.dims) header << " " << n;
    header << "\nspacing";
    for (double h : snap.spacing) header << " " << fmt(h);
    header << "\nstep " << snap.step << "\n";
    header << "time " << fmt(snap.time) << "\n";
    header << "data\n";
    out << header.str();

    std::vector<unsigned char> buf(snap.values.size() * 8);
    for (std::size_t i = 0; i < snap.values.size(); ++i)
        put_le64(std::bit_cast<std::uint64_t>(snap.values[i]), buf.data() + 8 * i);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw SnapshotError("snapshot: failed writing '" + path + "'");
}

void write_snapshot(const ScalarField& field, int step, double time, const std::string& path) {
    const Grid& grid = field.grid();
    Snapshot snap;
    snap.dims = grid.dims();
    snap.spacing = grid.spacings();
    snap.step = step;
    snap.time = time;
    snap.values.assign(field.data(), field.data() + grid.cell_count());
    write_snapshot(snap, path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("snapshot: cannot open '" + path + "'");

    if (read_header_line(in, path) != kMagic)
        throw SnapshotError("snapshot '" + path + "': bad magic line");

    Snapshot snap;
    {
        std::istringstream iss(read_header_line(in, path));
        std::string tag;
        iss >> tag;
        if (tag != "dims") throw SnapshotError("snapshot '" + path + "': expected dims line");
        std::int64_t n = 0;
        while (iss >> n) {
            if (n < 1) throw SnapshotError("snapshot '" + path + "': dims must be positive");
            snap.dims.push_back(n);
        }
        if (snap.dims.empty() || snap.dims.size() > 3)
            throw SnapshotError("snapshot '" + path + "': dims must list 1 to 3 axes");
    }
    {
        std::istringstream iss(read_header_line(in, path));
        std::string tag;
        iss >> tag;
        if (tag != "spacing") throw SnapshotError("snapshot '" + path + "': expected spacing line");
        double h = 0.0;
        while (iss >> h) snap.spacing.push_back(h);
        if (snap.spacing.size() != snap.dims.size())
            throw SnapshotError("snapshot '" + path + "': spacing must give one value per axis");
    }
    {
        std::istringstream iss(read_header_line(in, path));
        std::string tag;
        iss >> tag >> snap.step;
        if (tag != "step" || iss.fail())
            throw SnapshotError("snapshot '" + path + "': expected step line");
    }
    {
        std::istringstream iss(read_header_line(in, path));
        std::string tag;
        iss >> tag >> snap.time;
        if (tag != "time" || iss.fail())
            throw SnapshotError("snapshot '" + path + "': expected time line");
    }
    if (read_header_line(in, path) != "data")
        throw SnapshotError("snapshot '" + path + "': expected data marker");

    std::int64_t cells = 1;
    for (std::int64_t n : snap.dims) cells *= n;
    std::vector<unsigned char> buf(static_cast<std::size_t>(cells) * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw SnapshotError("snapshot '" + path + "': truncated payload");

    snap.values.resize(static_cast<std::size_t>(cells));
    for (std::int64_t i = 0; i < cells; ++i)
        snap.values[static_cast<std::size_t>(i)] =
            std::bit_cast<double>(get_le64(buf.data() + 8 * i));
    return snap;
}

ScalarField read_snapshot_field(const std::string& path, const Grid& grid) {
    Snapshot snap = read_snapshot(path);
    if (snap.dims != grid.dims())
        throw SnapshotError("snapshot '" + path + "': dims do not match the grid");
    for (std::size_t ax = 0; ax < snap.spacing.size(); ++ax)
        if (std::abs(snap.spacing[ax] - grid.spacings()[ax]) >
            1e-12 * std::abs(grid.spacings()[ax]))
            throw SnapshotError("snapshot '" + path + "': spacing does not match the grid");
    ScalarField field(grid);
    for (std::int64_t c = 0; c < grid.cell_count(); ++c)
        field[c] = snap.values[static_cast<std::size_t>(c)];
    return field;
}

}  // namespace chemoctrl
