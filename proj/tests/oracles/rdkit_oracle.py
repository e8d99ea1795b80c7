"""Freezes RDKit perception results and Morgan identifiers for the SMILES corpus.

Output: tests/data/rdkit_oracle.json
"""
import json
import pathlib
import sys

from rdkit import Chem, RDLogger
from rdkit.Chem import rdMolDescriptors, AllChem

RDLogger.DisableLog("rdApp.*")
here = pathlib.Path(__file__).resolve().parent
corpus = [l.strip() for l in (here / "smiles_corpus.txt").read_text().splitlines() if l.strip()]

out = []
for smi in corpus:
    m = Chem.MolFromSmiles(smi)
    if m is None:
        sys.exit(f"rdkit rejects {smi}")
    atoms = []
    for a in m.GetAtoms():
        atoms.append({
            "symbol": a.GetSymbol(),
            "degree": a.GetDegree(),
            "total_h": a.GetTotalNumHs(),
            "implicit_valence": a.GetImplicitValence(),
            "aromatic": a.GetIsAromatic(),
            "in_ring": a.IsInRing(),
        })
    bonds = [[b.GetBeginAtomIdx(), b.GetEndAtomIdx(), b.GetBondTypeAsDouble()] for b in m.GetBonds()]
    fp = AllChem.GetMorganFingerprint(m, 2)
    ids = sorted(fp.GetNonzeroElements().keys())
    out.append({
        "smiles": smi,
        "atoms": atoms,
        "bonds": bonds,
        "num_rings": m.GetRingInfo().NumRings(),
        "morgan_r2_ids": ids,
        "morgan_r0_count": len(AllChem.GetMorganFingerprint(m, 0).GetNonzeroElements()),
        "morgan_r1_count": len(AllChem.GetMorganFingerprint(m, 1).GetNonzeroElements()),
        "heavy_atoms": m.GetNumHeavyAtoms(),
        "aromatic_atoms": sum(1 for a in m.GetAtoms() if a.GetIsAromatic()),
        "num_bonds": m.GetNumBonds(),
    })

(here.parent / "data" / "rdkit_oracle.json").write_text(json.dumps(out, indent=1) + "\n")
print(f"{len(out)} molecules")
