// Copyright 2026 The qabos Authors
// SPDX-License-Identifier: Apache-2.0

#include "qabos/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qabos
{

namespace
{

using nlohmann::json;

[[noreturn]] void bad(const std::string &what)
{
  throw Error(ErrorCode::kModelFormat, what);
}

cplx read_pair(const json &p)
{
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
  {
    bad("matrix entries must be [re, im] pairs");
  }
  return {p[0].get<double>(), p[1].get<double>()};
}

CMatrix read_matrix(const json &j, int d)
{
  if (!j.is_array())
  {
    bad("matrix must be an array");
  }
  CMatrix m(d, d);
  const auto n = static_cast<std::size_t>(d);
  const bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (nested)
  {
    if (j.size() != n)
    {
      bad("nested matrix must have D rows");
    }
    for (std::size_t r = 0; r < n; ++r)
    {
      if (!j[r].is_array() || j[r].size() != n)
      {
        bad("nested matrix rows must have D entries");
      }
      for (std::size_t c = 0; c < n; ++c)
      {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_pair(j[r][c]);
      }
    }
    return m;
  }
  if (j.size() != n * n)
  {
    bad("matrix must have D*D entries");
  }
  for (std::size_t k = 0; k < n * n; ++k)
  {
    m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = read_pair(j[k]);
  }
  return m;
}

json write_matrix(const CMatrix &m)
{
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
  {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
    {
      out.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return out;
}

}  // namespace

LindbladModel model_from_json(const std::string &text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::exception &e)
  {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object())
  {
    bad("model document must be an object");
  }
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
  {
    bad("missing integer field 'dimension'");
  }
  if (!doc.contains("drive_arity") || !doc["drive_arity"].is_number_integer())
  {
    bad("missing integer field 'drive_arity'");
  }
  const int d = doc["dimension"].get<int>();
  const int arity = doc["drive_arity"].get<int>();
  if (d < 2 || d > 32)
  {
    bad("'dimension' must be in [2, 32]");
  }
  if (arity < 0)
  {
    bad("'drive_arity' must be >= 0");
  }
  double norm = 2.0;
  if (doc.contains("basis_norm"))
  {
    if (!doc["basis_norm"].is_number() || !(doc["basis_norm"].get<double>() > 0.0))
    {
      bad("'basis_norm' must be a positive number");
    }
    norm = doc["basis_norm"].get<double>();
  }

  CMatrix constant = CMatrix::Zero(d, d);
  std::vector<CMatrix> drives(static_cast<std::size_t>(arity), CMatrix::Zero(d, d));
  const json terms = doc.value("hamiltonian_terms", json::array());
  if (!terms.is_array())
  {
    bad("'hamiltonian_terms' must be an array");
  }
  for (const auto &t : terms)
  {
    if (!t.is_object() || !t.contains("coefficient") || !t.contains("matrix"))
    {
      bad("each Hamiltonian term needs 'coefficient' and 'matrix'");
    }
    const CMatrix m = read_matrix(t["matrix"], d);
    const json &c = t["coefficient"];
    if (c.is_string() && c.get<std::string>() == "constant")
    {
      constant += m;
    }
    else if (c.is_number_integer())
    {
      const int k = c.get<int>();
      if (k < 0 || k >= arity)
      {
        bad("Hamiltonian coefficient index out of range");
      }
      drives[static_cast<std::size_t>(k)] += m;
    }
    else
    {
      bad("'coefficient' must be a drive index or \"constant\"");
    }
  }

  std::vector<Dissipator> diss;
  const json dj = doc.value("dissipators", json::array());
  if (!dj.is_array())
  {
    bad("'dissipators' must be an array");
  }
  for (const auto &e : dj)
  {
    if (!e.is_object() || !e.contains("rate") || !e["rate"].is_number() || !e.contains("matrix"))
    {
      bad("each dissipator needs numeric 'rate' and 'matrix'");
    }
    diss.push_back(Dissipator{read_matrix(e["matrix"], d), e["rate"].get<double>()});
  }

  try
  {
    return LindbladModel::affine(make_basis(d, norm), constant, drives, diss);
  }
  catch (const Error &e)
  {
    bad(e.what());
  }
}

LindbladModel load_model_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    bad("cannot open model file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string model_to_json(const LindbladModel &model)
{
  if (!model.is_affine())
  {
    throw Error(ErrorCode::kInvalidArgument, "only affine models can be serialized");
  }
  json doc;
  doc["dimension"] = model.dimension();
  doc["drive_arity"] = model.drive_arity();
  doc["basis_norm"] = model.basis().norm_const();
  json terms = json::array();
  terms.push_back({{"coefficient", "constant"}, {"matrix", write_matrix(model.constant_term())}});
  for (int k = 0; k < model.drive_arity(); ++k)
  {
    terms.push_back({{"coefficient", k}, {"matrix", write_matrix(model.drive_term(k))}});
  }
  doc["hamiltonian_terms"] = terms;
  json diss = json::array();
  for (const auto &d : model.dissipators())
  {
    diss.push_back({{"rate", d.rate}, {"matrix", write_matrix(d.jump)}});
  }
  doc["dissipators"] = diss;
  return doc.dump(2);
}

}  // namespace qabos
