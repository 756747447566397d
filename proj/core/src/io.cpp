// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "schnak/errors.hpp"

namespace schnak
{

namespace
{

static_assert(std::endian::native == std::endian::little, "dump format assumes little endian");

std::string StripSuffix(const std::string &path)
{
  for (const char *ext : {".hdr", ".bin"})
  {
    const std::size_t len = std::strlen(ext);
    if (path.size() > len && path.compare(path.size() - len, len, ext) == 0)
    {
      return path.substr(0, path.size() - len);
    }
  }
  return path;
}

std::string FormatDouble(double x)
{
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void WriteVtk(const std::string &path, const MeshP1 &mesh, const std::vector<NamedField> &fields,
              const std::string &title)
{
  std::ofstream os(path);
  if (!os)
  {
    throw InvalidArgument("vtk: cannot open " + path);
  }
  os.precision(17);
  const Index nn = mesh.num_nodes(), nt = mesh.num_triangles();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (const auto &c : mesh.coords())
  {
    os << c[0] << ' ' << c[1] << " 0\n";
  }
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto &t : mesh.triangles())
  {
    os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  os << "CELL_TYPES " << nt << '\n';
  for (Index t = 0; t < nt; ++t)
  {
    os << "5\n";
  }
  if (!fields.empty())
  {
    os << "POINT_DATA " << nn << '\n';
  }
  for (const auto &[name, f] : fields)
  {
    if (!f || f->size() != nn)
    {
      throw InvalidArgument("vtk: field " + name + " does not match the mesh");
    }
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Index i = 0; i < nn; ++i)
    {
      os << (*f)[i] << '\n';
    }
  }
  if (!os)
  {
    throw InvalidArgument("vtk: write failed for " + path);
  }
}

const NodalField &FieldDump::Get(const std::string &name) const
{
  for (std::size_t i = 0; i < names.size(); ++i)
  {
    if (names[i] == name)
    {
      return fields.at(i);
    }
  }
  throw InvalidArgument("field dump: no field named " + name);
}

void WriteFieldDump(const std::string &base, const FieldDump &dump)
{
  if (dump.names.size() != dump.fields.size() || dump.fields.empty())
  {
    throw InvalidArgument("field dump: names and fields differ");
  }
  const Index nodes = dump.fields.front().size();
  for (const auto &f : dump.fields)
  {
    if (f.size() != nodes)
    {
      throw InvalidArgument("field dump: fields differ in length");
    }
  }
  const std::string stem = StripSuffix(base);
  std::ofstream hdr(stem + ".hdr");
  if (!hdr)
  {
    throw InvalidArgument("field dump: cannot open " + stem + ".hdr");
  }
  hdr << "n=" << dump.n << "\nh=" << FormatDouble(dump.h) << "\nnodes=" << nodes << "\nfields=";
  for (std::size_t i = 0; i < dump.names.size(); ++i)
  {
    hdr << (i ? "," : "") << dump.names[i];
  }
  hdr << "\nformat=float64-le\n";

  std::ofstream bin(stem + ".bin", std::ios::binary);
  if (!bin)
  {
    throw InvalidArgument("field dump: cannot open " + stem + ".bin");
  }
  for (const auto &f : dump.fields)
  {
    bin.write(reinterpret_cast<const char *>(f.data()),
              static_cast<std::streamsize>(sizeof(double) * nodes));
  }
  if (!hdr || !bin)
  {
    throw InvalidArgument("field dump: write failed for " + stem);
  }
}

FieldDump ReadFieldDump(const std::string &path)
{
  const std::string stem = StripSuffix(path);
  std::ifstream hdr(stem + ".hdr");
  if (!hdr)
  {
    throw InvalidArgument("field dump: cannot open " + stem + ".hdr");
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(hdr, line))
  {
    const auto eq = line.find('=');
    if (eq != std::string::npos)
    {
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  for (const char *key : {"n", "h", "nodes", "fields", "format"})
  {
    if (!kv.count(key))
    {
      throw InvalidArgument(std::string("field dump: header lacks ") + key);
    }
  }
  if (kv["format"] != "float64-le")
  {
    throw InvalidArgument("field dump: unsupported format " + kv["format"]);
  }
  FieldDump d;
  Index nodes = 0;
  try
  {
    d.n = std::stoi(kv["n"]);
    d.h = std::stod(kv["h"]);
    nodes = std::stol(kv["nodes"]);
  }
  catch (const std::exception &)
  {
    throw InvalidArgument("field dump: malformed header in " + stem + ".hdr");
  }
  std::istringstream names(kv["fields"]);
  std::string name;
  while (std::getline(names, name, ','))
  {
    d.names.push_back(name);
  }
  if (nodes <= 0 || d.names.empty())
  {
    throw InvalidArgument("field dump: empty header in " + stem + ".hdr");
  }

  std::ifstream bin(stem + ".bin", std::ios::binary);
  if (!bin)
  {
    throw InvalidArgument("field dump: cannot open " + stem + ".bin");
  }
  for (std::size_t i = 0; i < d.names.size(); ++i)
  {
    NodalField f(nodes);
    bin.read(reinterpret_cast<char *>(f.data()),
             static_cast<std::streamsize>(sizeof(double) * nodes));
    if (!bin)
    {
      throw InvalidArgument("field dump: truncated " + stem + ".bin");
    }
    d.fields.push_back(std::move(f));
  }
  return d;
}

}  // namespace schnak
