#include <zlib.h>

#include <fstream>
#include <iterator>

#include "msq/index.hpp"
#include "msq/io.hpp"

namespace msq {
namespace {

constexpr char kMagic[4] = {'M', 'S', 'Q', 'X'};

std::uint32_t crc_of(const std::vector<std::uint8_t>& bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

// [u64 length][payload][u32 crc32(payload)]
void put_section(ByteWriter& out, const ByteWriter& section) {
  out.u64(section.size());
  out.bytes(section.data().data(), section.size());
  out.u32(crc_of(section.data()));
}

ByteReader get_section(ByteReader& in, const char* what) {
  const std::uint64_t n = in.u64();
  if (n > in.remaining()) throw FormatError(std::string("truncated ") + what + " section");
  const std::uint8_t* p = in.take(n);
  const std::uint32_t stored = in.u32();
  const auto actual = static_cast<std::uint32_t>(crc32(0L, p, static_cast<uInt>(n)));
  if (stored != actual) throw FormatError(std::string("checksum mismatch in ") + what + " section");
  return ByteReader(p, n);
}

void end_section(const ByteReader& r, const char* what) {
  if (!r.done()) throw FormatError(std::string("trailing bytes in ") + what + " section");
}

void write_symbols(ByteWriter& w, const SymbolTable& t) {
  w.u64(t.size());
  for (const auto& s : t.names()) w.str(s);
}

SymbolTable read_symbols(ByteReader& r) {
  SymbolTable t;
  const std::uint64_t n = r.count(8);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = r.str();
    if (t.intern(s) != i) throw FormatError("duplicate symbol");
  }
  return t;
}

}  // namespace

std::vector<std::uint8_t> serialize_index(const MsqIndex& index) {
  ByteWriter out;
  out.bytes(reinterpret_cast<const std::uint8_t*>(kMagic), 4);
  out.u16(kIndexFormatVersion);

  ByteWriter header;
  header.i64(index.partition().x0);
  header.i64(index.partition().y0);
  header.i64(index.partition().l);
  header.u32(index.block());
  header.u32(index.fanout());
  header.u64(index.size());
  header.u64(index.vocab().degree.size());
  header.u64(index.vocab().label.size());
  header.u64(index.regions().size());
  put_section(out, header);

  ByteWriter symbols;
  write_symbols(symbols, index.labels().vertex);
  write_symbols(symbols, index.labels().edge);
  put_section(out, symbols);

  ByteWriter vocab;
  const auto& vd = index.vocab().degree;
  for (std::uint32_t i = 0; i < vd.size(); ++i) {
    const auto& q = vd.at(i);
    vocab.u32(q.vertex_label);
    vocab.u32(static_cast<std::uint32_t>(q.edge_labels.size()));
    for (auto s : q.edge_labels) vocab.u32(s);
    vocab.u64(vd.frequency(i));
  }
  const auto& vl = index.vocab().label;
  for (std::uint32_t i = 0; i < vl.size(); ++i) {
    vocab.u8(static_cast<std::uint8_t>(vl.at(i).kind));
    vocab.u32(vl.at(i).label);
    vocab.u64(vl.frequency(i));
  }
  put_section(out, vocab);

  ByteWriter graphs;
  for (const auto& g : index.graphs()) {
    graphs.u32(static_cast<std::uint32_t>(g.vertex_count()));
    for (auto l : g.vertex_labels()) graphs.u32(l);
    graphs.u32(static_cast<std::uint32_t>(g.edge_count()));
    for (const auto& e : g.edges()) {
      graphs.u32(e.u);
      graphs.u32(e.v);
      graphs.u32(e.label);
    }
  }
  put_section(out, graphs);

  // Region blobs are laid out after the directory; offsets are absolute.
  std::vector<ByteWriter> blobs(index.regions().size());
  std::size_t k = 0;
  for (const auto& [r, t] : index.regions()) t.write(blobs[k++]);
  const std::size_t dir_bytes = 8 + index.regions().size() * 32 + 4;
  std::uint64_t offset = out.size() + dir_bytes;
  ByteWriter dir;
  k = 0;
  for (const auto& [r, t] : index.regions()) {
    dir.i64(r.i);
    dir.i64(r.j);
    dir.u64(offset);
    dir.u64(blobs[k].size());
    offset += 8 + blobs[k].size() + 4;
    ++k;
  }
  put_section(out, dir);
  for (const auto& b : blobs) put_section(out, b);
  return out.release();
}

MsqIndex deserialize_index(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes.data(), bytes.size());
  if (bytes.size() < 6 || std::memcmp(in.take(4), kMagic, 4) != 0)
    throw FormatError("not an index file (bad magic)");
  const std::uint16_t version = in.u16();
  if (version != kIndexFormatVersion)
    throw FormatError("unsupported index format version " + std::to_string(version));

  auto header = get_section(in, "header");
  PartitionParams part;
  part.x0 = header.i64();
  part.y0 = header.i64();
  part.l = header.i64();
  const std::uint32_t block = header.u32();
  const std::uint32_t fanout = header.u32();
  const std::uint64_t n_graphs = header.u64();
  const std::uint64_t n_vd = header.u64();
  const std::uint64_t n_vl = header.u64();
  const std::uint64_t n_regions = header.u64();
  end_section(header, "header");
  if (part.l < 1 || block < 1 || fanout < 2) throw FormatError("bad index parameters");

  auto sym = get_section(in, "symbol");
  LabelTables labels;
  labels.vertex = read_symbols(sym);
  labels.edge = read_symbols(sym);
  end_section(sym, "symbol");

  auto voc = get_section(in, "vocabulary");
  if (n_vd > voc.remaining() / 16 || n_vl > voc.remaining() / 13)
    throw FormatError("truncated vocabulary section");
  std::vector<DegreeQGram> dkeys;
  std::vector<std::uint64_t> dfreq;
  for (std::uint64_t i = 0; i < n_vd; ++i) {
    DegreeQGram q;
    q.vertex_label = voc.u32();
    const std::uint32_t deg = voc.u32();
    if (deg > voc.remaining() / 4) throw FormatError("truncated vocabulary section");
    q.degree = deg;
    for (std::uint32_t e = 0; e < deg; ++e) q.edge_labels.push_back(voc.u32());
    dkeys.push_back(std::move(q));
    dfreq.push_back(voc.u64());
  }
  std::vector<LabelQGram> lkeys;
  std::vector<std::uint64_t> lfreq;
  for (std::uint64_t i = 0; i < n_vl; ++i) {
    const std::uint8_t kind = voc.u8();
    if (kind > 1) throw FormatError("bad label q-gram kind");
    const Symbol label = voc.u32();
    lkeys.push_back({static_cast<LabelKind>(kind), label});
    lfreq.push_back(voc.u64());
  }
  end_section(voc, "vocabulary");
  Vocabularies vocab;
  try {
    vocab = {DegreeVocabulary::from_entries(std::move(dkeys), std::move(dfreq)),
             LabelVocabulary::from_entries(std::move(lkeys), std::move(lfreq))};
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }

  auto gs = get_section(in, "graph");
  if (n_graphs > gs.remaining() / 8) throw FormatError("truncated graph section");
  std::vector<LabeledGraph> graphs;
  graphs.reserve(n_graphs);
  for (std::uint64_t i = 0; i < n_graphs; ++i) {
    LabeledGraph g(static_cast<GraphId>(i));
    const std::uint32_t nv = gs.u32();
    if (nv > gs.remaining() / 4) throw FormatError("truncated graph section");
    for (std::uint32_t v = 0; v < nv; ++v) {
      const Symbol l = gs.u32();
      if (l >= labels.vertex.size()) throw FormatError("vertex label out of range");
      g.add_vertex(l);
    }
    const std::uint32_t ne = gs.u32();
    if (ne > gs.remaining() / 12) throw FormatError("truncated graph section");
    for (std::uint32_t e = 0; e < ne; ++e) {
      const VertexId u = gs.u32();
      const VertexId v = gs.u32();
      const Symbol l = gs.u32();
      if (l >= labels.edge.size()) throw FormatError("edge label out of range");
      try {
        g.add_edge(u, v, l);
      } catch (const GraphError& err) {
        throw FormatError(err.what());
      }
    }
    graphs.push_back(std::move(g));
  }
  end_section(gs, "graph");

  const std::size_t dir_at = bytes.size() - in.remaining();
  auto dir = get_section(in, "region directory");
  if (n_regions > dir.remaining() / 32) throw FormatError("truncated region directory");
  std::map<RegionId, SuccinctTree> regions;
  std::uint64_t expected = dir_at + 8 + n_regions * 32 + 4;
  std::vector<std::pair<RegionId, std::uint64_t>> entries;
  for (std::uint64_t i = 0; i < n_regions; ++i) {
    RegionId r{dir.i64(), dir.i64()};
    const std::uint64_t off = dir.u64();
    const std::uint64_t len = dir.u64();
    if (off != expected) throw FormatError("region offset mismatch");
    expected += 8 + len + 4;
    entries.emplace_back(r, len);
  }
  end_section(dir, "region directory");
  std::uint64_t leaves = 0;
  for (const auto& [r, len] : entries) {
    auto blob = get_section(in, "region");
    SuccinctTree t = SuccinctTree::read(blob);
    end_section(blob, "region");
    for (GraphId g : t.leaves()) {
      if (g >= graphs.size()) throw FormatError("leaf graph id out of range");
      if (subregion_of(static_cast<std::int64_t>(graphs[g].vertex_count()),
                       static_cast<std::int64_t>(graphs[g].edge_count()), part) != r)
        throw FormatError("graph stored in the wrong region");
    }
    leaves += t.leaf_count();
    if (!regions.emplace(r, std::move(t)).second) throw FormatError("duplicate region");
  }
  if (!in.done()) throw FormatError("trailing bytes after index");
  if (leaves != graphs.size()) throw FormatError("leaf count does not match graph count");
  return assemble_index(std::move(graphs), std::move(labels), std::move(vocab), part, block,
                        fanout, std::move(regions));
}

void save_index(const MsqIndex& index, const std::string& path) {
  const auto bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

MsqIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index: " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return deserialize_index(bytes);
}

}  // namespace msq
