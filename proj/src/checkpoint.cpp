#include "nsdamp/checkpoint.hpp"

#include <zlib.h>

#include <cstring>
#include <optional>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nsdamp/error.hpp"

namespace nsdamp {

namespace {

constexpr char magic[8] = {'N', 'S', 'D', 'C', 'K', 'P', 'T', '\0'};

template <class T>
void put(std::string& buf, const T& v) {
    buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

class Reader {
public:
    explicit Reader(const std::string& buf) : buf_(buf) {}

    template <class T>
    T get() {
        if (pos_ + sizeof(T) > buf_.size()) throw CheckpointError("checkpoint: truncated payload");
        T v;
        std::memcpy(&v, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::size_t position() const { return pos_; }

private:
    const std::string& buf_;
    std::size_t pos_ = 0;
};

std::uint32_t crc_of(const char* data, std::size_t len) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths
    while (len > 0) {
        const uInt chunk = static_cast<uInt>(std::min<std::size_t>(len, 1u << 30));
        crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
        data += chunk;
        len -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

void checkpoint_save(const SolverState& state, std::ostream& sink) {
    const Grid& g = state.u.grid();
    std::string buf;
    buf.append(magic, sizeof(magic));
    put(buf, checkpoint_version);
    put(buf, static_cast<std::int32_t>(g.dim()));
    put(buf, static_cast<std::int32_t>(g.n()));
    put(buf, g.box_length());
    put(buf, state.t);
    put(buf, state.dt);
    put(buf, static_cast<std::int64_t>(state.step_count));
    put(buf, static_cast<std::uint8_t>(state.u.divergence_free() ? 1 : 0));
    put(buf, static_cast<std::uint64_t>(state.u.data().size()));
    for (const auto& c : state.u.data()) {
        put(buf, c.real());
        put(buf, c.imag());
    }
    put(buf, crc_of(buf.data(), buf.size()));
    sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!sink) throw std::runtime_error("checkpoint: write failed");
}

SolverState checkpoint_load(std::istream& source) {
    std::ostringstream ss;
    ss << source.rdbuf();
    const std::string buf = ss.str();
    if (buf.size() < sizeof(magic) + sizeof(std::uint32_t) || std::memcmp(buf.data(), magic, sizeof(magic)) != 0)
        throw CheckpointError("checkpoint: bad magic");
    if (buf.size() < sizeof(magic) + 2 * sizeof(std::uint32_t))
        throw CheckpointError("checkpoint: truncated payload");

    const std::size_t body = buf.size() - sizeof(std::uint32_t);
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, buf.data() + body, sizeof(stored_crc));
    if (crc_of(buf.data(), body) != stored_crc) throw CheckpointError("checkpoint: checksum mismatch");

    Reader r(buf);
    for (std::size_t i = 0; i < sizeof(magic); ++i) r.get<char>();
    const auto version = r.get<std::uint32_t>();
    if (version != checkpoint_version)
        throw CheckpointError("checkpoint: version " + std::to_string(version) + " (expected " +
                              std::to_string(checkpoint_version) + ")");
    const auto dim = r.get<std::int32_t>();
    const auto n = r.get<std::int32_t>();
    const auto box = r.get<double>();
    const auto t = r.get<double>();
    const auto dt = r.get<double>();
    const auto steps = r.get<std::int64_t>();
    const auto divfree = r.get<std::uint8_t>();
    const auto count = r.get<std::uint64_t>();

    std::optional<Grid> grid;
    try {
        grid.emplace(dim, n, box);
    } catch (const ValidationError& e) {
        throw CheckpointError(std::string("checkpoint: invalid grid: ") + e.what());
    }
    SpectralField u(*grid, dim);
    if (count != u.data().size()) throw CheckpointError("checkpoint: coefficient count does not match grid");
    for (auto& c : u.data()) {
        const double re = r.get<double>();
        const double im = r.get<double>();
        c = Complex(re, im);
    }
    if (r.position() != body) throw CheckpointError("checkpoint: trailing bytes");
    u.set_divergence_free(divfree != 0);
    return SolverState{t, std::move(u), steps, dt};
}

void checkpoint_save_file(const SolverState& state, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp);
        checkpoint_save(state, out);
    }
    std::filesystem::rename(tmp, path);
}

SolverState checkpoint_load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("checkpoint: cannot open " + path);
    return checkpoint_load(in);
}

}  // namespace nsdamp
