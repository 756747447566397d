// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_IO_HPP
#define SCHNAK_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "schnak/mesh.hpp"

namespace schnak
{

using NamedField = std::pair<std::string, const NodalField *>;

// Legacy ASCII VTK unstructured grid with one POINT_DATA scalar per field.
void WriteVtk(const std::string &path, const MeshP1 &mesh, const std::vector<NamedField> &fields,
              const std::string &title = "schnak");

//
// Nodal dump: <base>.hdr is a key=value text header (n, h, nodes, fields, format) and
// <base>.bin holds the fields back to back as little-endian float64.
//
struct FieldDump
{
  int n = 0;
  double h = 0.0;
  std::vector<std::string> names;
  std::vector<NodalField> fields;

  // Field by name; throws InvalidArgument when missing.
  const NodalField &Get(const std::string &name) const;
};

void WriteFieldDump(const std::string &base, const FieldDump &dump);
// Accepts the base path or either of its two files. Throws InvalidArgument on a missing or
// malformed file.
FieldDump ReadFieldDump(const std::string &path);

}  // namespace schnak

#endif  // SCHNAK_IO_HPP
