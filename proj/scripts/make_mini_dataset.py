#!/usr/bin/env python3
"""Writes the bundled MINI dataset: a small MeSH vocabulary, embeddings, topics, qrels and a
document corpus used by fake_eutils.py to record the E-utilities replay fixture."""

import json
import math
import random
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "mini"

# uid, name, entry terms, tree numbers
MESH = [
    ("D001829", "Body Regions", [], ["A01"]),
    ("D006257", "Head", [], ["A01.456"]),
    ("D005123", "Eye", ["Eyes"], ["A01.456.505"]),
    ("D009333", "Neck", [], ["A01.598"]),
    ("D007239", "Infections", ["Infection"], ["C01"]),
    ("D001424", "Bacterial Infections", ["Bacterial Infection"], ["C01.150"]),
    ("D014376", "Tuberculosis", ["TB", "Koch's Disease"], ["C01.150.252"]),
    ("D018088", "Tuberculosis, Multidrug-Resistant", ["MDR TB", "Multidrug-Resistant Tuberculosis"],
     ["C01.150.252.410"]),
    ("D055985", "Extensively Drug-Resistant Tuberculosis", ["XDR TB"], ["C01.150.252.410.500"]),
    ("D014397", "Tuberculosis, Pulmonary", ["Pulmonary Tuberculosis"], ["C01.150.252.823"]),
    ("D024901", "Drug Resistance, Multiple, Bacterial", ["Multidrug Resistance, Bacterial"], ["G06.225"]),
    ("D005128", "Eye Diseases", ["Eye Disorders"], ["C11"]),
    ("D005901", "Glaucoma", ["Glaucomas"], ["C11.525"]),
    ("D005902", "Glaucoma, Open-Angle", ["POAG", "Open-Angle Glaucoma"], ["C11.525.381"]),
    ("D009798", "Ocular Hypertension", ["Raised Intraocular Pressure"], ["C11.525.705"]),
    ("D007429", "Intraocular Pressure", ["Ocular Tension"], ["G14.640"]),
    ("D002318", "Cardiovascular Diseases", ["Cardiovascular Disease"], ["C14"]),
    ("D006331", "Heart Diseases", ["Cardiac Diseases"], ["C14.280"]),
    ("D017202", "Myocardial Ischemia", ["Ischemic Heart Disease"], ["C14.280.647"]),
    ("D009203", "Myocardial Infarction", ["Heart Attack", "Cardiac Infarction"], ["C14.280.647.500"]),
    ("D056988", "Anterior Wall Myocardial Infarction", ["Anterior Myocardial Infarction"],
     ["C14.280.647.500.093"]),
    ("D003933", "Diagnosis", [], ["E01"]),
    ("D019937", "Diagnostic Techniques and Procedures", ["Diagnostic Procedures"], ["E01.370"]),
    ("D019411", "Clinical Laboratory Techniques", ["Laboratory Techniques, Clinical"], ["E01.370.225"]),
    ("D000072", "Point-of-Care Testing", ["Rapid Diagnostic Tests", "Bedside Testing"], ["E01.370.225.750"]),
    ("D008403", "Mass Screening", ["Screening"], ["E01.370.500"]),
    ("D011379", "Prognosis", [], ["E01.789"]),
    ("D015415", "Biomarkers", ["Biological Markers", "Biomarker"], ["D23.101"]),
    ("D014336", "Troponin", [], ["D12.776.875"]),
    ("D019210", "Troponin I", [], ["D12.776.875.500"]),
    ("D019211", "Troponin T", [], ["D12.776.875.700"]),
    ("D012680", "Sensitivity and Specificity", ["Specificity"], ["E05.318"]),
    ("D013183", "Sputum", [], ["A12.200.750"]),
    ("D016896", "Treatment Outcome", ["Clinical Effectiveness"], ["N04.761"]),
]

# Semantic axes of the dense space:
# 0 tuberculosis/infection, 1 drug resistance, 2 eye, 3 pressure,
# 4 cardiac, 5 diagnosis/testing, 6 biomarker/protein, 7 anatomy/outcome
DIM = 8
MESH_AXES = {
    "D001829": {7: 1.0},
    "D006257": {7: 1.0, 2: 0.3},
    "D005123": {2: 0.9, 7: 0.7},
    "D009333": {7: 1.0, 4: 0.1},
    "D007239": {0: 0.8, 7: 0.3},
    "D001424": {0: 0.9, 7: 0.25, 1: 0.1},
    "D014376": {0: 1.0, 1: 0.15},
    "D018088": {0: 0.85, 1: 0.8},
    "D055985": {0: 0.8, 1: 0.95},
    "D014397": {0: 0.95, 7: 0.3},
    "D024901": {1: 1.0, 0: 0.4},
    "D005128": {2: 0.9, 7: 0.3},
    "D005901": {2: 1.0, 3: 0.45},
    "D005902": {2: 0.95, 3: 0.4, 7: 0.1},
    "D009798": {2: 0.7, 3: 0.9},
    "D007429": {2: 0.55, 3: 1.0},
    "D002318": {4: 0.9, 7: 0.3},
    "D006331": {4: 1.0, 7: 0.2},
    "D017202": {4: 1.0, 7: 0.15, 6: 0.05},
    "D009203": {4: 1.0, 6: 0.15},
    "D056988": {4: 0.95, 7: 0.35},
    "D003933": {5: 1.0},
    "D019937": {5: 0.95, 7: 0.2},
    "D019411": {5: 0.8, 6: 0.4},
    "D000072": {5: 0.9, 6: 0.2, 7: 0.1},
    "D008403": {5: 0.7, 7: 0.5},
    "D011379": {5: 0.5, 7: 0.8},
    "D015415": {6: 1.0, 5: 0.3},
    "D014336": {6: 0.9, 4: 0.45},
    "D019210": {6: 0.85, 4: 0.5},
    "D019211": {6: 0.85, 4: 0.45, 7: 0.1},
    "D012680": {5: 0.8, 7: 0.4},
    "D013183": {0: 0.6, 5: 0.5, 7: 0.4},
    "D016896": {7: 1.0, 5: 0.2},
}

KEYWORD_AXES = {
    "tuberculosis": {0: 1.0, 1: 0.12},
    "XDR TB": {0: 0.8, 1: 0.9},
    "diagnosis": {5: 1.0, 7: 0.05},
    "rapid test": {5: 0.9, 6: 0.2},
    "sputum smear": {0: 0.5, 5: 0.7, 7: 0.2},
    "glaucoma": {2: 1.0, 3: 0.4},
    "intraocular pressure": {2: 0.6, 3: 1.0},
    "screening": {5: 0.6, 7: 0.45},
    "myocardial infarction": {4: 1.0, 6: 0.14},
    "heart attack": {4: 1.0, 6: 0.15},
    "troponin": {6: 1.0, 4: 0.4},
    "biomarker": {6: 0.9, 5: 0.3},
    "tb": {0: 1.0, 1: 0.3},
    "eye": {2: 0.9, 7: 0.6},
}

WORD_VECTORS = {
    # axes: tuberculosis, eye, heart, diagnostics
    "tuberculosis": [1.0, 0.0, 0.0, 0.05],
    "xdr": [0.9, 0.0, 0.0, 0.1],
    "tb": [0.95, 0.0, 0.0, 0.0],
    "diagnosis": [0.0, 0.0, 0.0, 1.0],
    "rapid": [0.1, 0.0, 0.0, 0.8],
    "test": [0.0, 0.0, 0.05, 1.0],
    "sputum": [0.8, 0.0, 0.0, 0.3],
    "smear": [0.4, 0.0, 0.0, 0.5],
    "glaucoma": [0.0, 1.0, 0.0, 0.0],
    "intraocular": [0.0, 0.9, 0.1, 0.0],
    "pressure": [0.0, 0.6, 0.5, 0.1],
    "screening": [0.0, 0.1, 0.0, 0.9],
    "myocardial": [0.0, 0.0, 1.0, 0.0],
    "infarction": [0.05, 0.0, 0.95, 0.0],
    "heart": [0.0, 0.0, 1.0, 0.05],
    "attack": [0.0, 0.0, 0.7, 0.0],
    "troponin": [0.0, 0.0, 0.5, 0.8],
    "biomarker": [0.0, 0.0, 0.1, 1.0],
    "eye": [0.0, 1.0, 0.0, 0.1],
}

TOPICS = [
    {"id": "CD001", "query": '(tuberculosis[tiab] OR "XDR TB"[tiab] OR "Tuberculosis, Multidrug-Resistant"[MeSH Terms]) '
                             'AND (diagnosis[tiab] OR "rapid test"[tiab] OR "sputum smear"[tiab])'},
    {"id": "CD002", "query": '(glaucoma[tiab] OR "intraocular pressure"[tiab]) AND (screening[tiab] OR "Mass Screening"[mh])'},
    {"id": "CD003", "query": '(myocardial infarction[tiab] OR "heart attack"[tiab] OR "Myocardial Infarction"[mh]) '
                             'AND (troponin[tiab] OR biomarker[tiab])'},
]

DATES = [("CD001", "2000/01/01", "2016/12/31"), ("CD002", "", "2017/06/30"), ("CD003", "2005/01/01", "")]

# pmid, entrez date, text, MeSH headings
CORPUS = [
    ("10000001", "2012/03/14", "Rapid test for tuberculosis diagnosis in primary care", ["D014376", "D000072"]),
    ("10000002", "2014/07/02", "Sputum smear microscopy versus culture for pulmonary tuberculosis diagnosis",
     ["D014397", "D013183", "D012680"]),
    ("10000003", "2015/11/20", "XDR TB outbreak: molecular diagnosis of resistance", ["D055985", "D003933"]),
    ("10000004", "2009/05/05", "Treatment outcome of multidrug-resistant tuberculosis", ["D018088", "D016896"]),
    ("10000005", "2011/01/30", "Line probe assay as a rapid test for MDR TB", ["D018088", "D000072"]),
    ("10000006", "2018/02/11", "Point-of-care diagnosis of tuberculosis in children", ["D014376", "D000072"]),
    ("10000007", "1998/09/09", "Sputum smear grading and tuberculosis diagnosis", ["D014397", "D013183"]),
    ("10000008", "2013/06/06", "Bacterial infections in intensive care", ["D001424"]),
    ("10000009", "2016/04/18", "Diagnostic accuracy of interferon gamma release assays", ["D014376", "D012680"]),
    ("10000010", "2010/10/10", "Clinical laboratory techniques for mycobacteria", ["D019411", "D014376"]),
    ("10000011", "2007/08/21", "Glaucoma screening in community settings", ["D005901", "D008403"]),
    ("10000012", "2012/12/12", "Intraocular pressure measurement for glaucoma case finding", ["D007429", "D005901"]),
    ("10000013", "2016/03/03", "Screening for open-angle glaucoma with optical coherence tomography",
     ["D005902", "D008403"]),
    ("10000014", "2018/01/15", "Population screening for ocular hypertension", ["D009798", "D008403"]),
    ("10000015", "2014/09/27", "Eye diseases in the elderly", ["D005128"]),
    ("10000016", "2011/02/14", "Intraocular pressure and diagnosis of glaucoma", ["D007429", "D005901", "D003933"]),
    ("10000017", "2003/07/07", "Tonometry for glaucoma detection in primary care", ["D005901", "D019937"]),
    ("10000018", "2015/05/25", "Head and neck anatomy", ["D006257", "D009333"]),
    ("10000019", "2009/11/11", "Troponin as a biomarker of myocardial infarction", ["D009203", "D014336", "D015415"]),
    ("10000020", "2012/01/19", "High sensitivity troponin T in heart attack", ["D009203", "D019211"]),
    ("10000021", "2006/06/16", "Troponin I for the diagnosis of acute myocardial infarction", ["D009203", "D019210"]),
    ("10000022", "2013/03/23", "Biomarker panels in anterior myocardial infarction", ["D056988", "D015415"]),
    ("10000023", "2004/04/04", "Myocardial ischemia and troponin release", ["D017202", "D014336"]),
    ("10000024", "2017/08/08", "Copeptin biomarker for early rule-out of heart attack", ["D009203", "D015415"]),
    ("10000025", "2010/02/02", "Prognosis after myocardial infarction", ["D009203", "D011379"]),
    ("10000026", "2008/12/01", "Cardiovascular diseases and biomarkers", ["D002318", "D015415"]),
    ("10000027", "2015/10/31", "Point-of-care troponin testing in chest pain", ["D014336", "D000072"]),
    ("10000028", "2002/02/20", "Heart diseases in athletes", ["D006331"]),
    ("10000029", "2014/02/02", "Tuberculosis diagnosis in cattle herds", ["D014376"]),
    ("10000030", "2016/09/09", "Letter: troponin after heart attack", ["D009203", "D014336"]),
]

QRELS = {
    "CD001": ["10000001", "10000002", "10000003", "10000005", "10000009"],
    "CD002": ["10000011", "10000012", "10000013", "10000016"],
    "CD003": ["10000019", "10000020", "10000021", "10000022", "10000024"],
}
QREL_NEGATIVES = {
    "CD001": ["10000004", "10000008"],
    "CD002": ["10000015"],
    "CD003": ["10000025", "10000026"],
}

# Query translations PubMed's automatic term mapping would produce for the keywords.
ATM = {
    "tuberculosis": '"tuberculosis"[MeSH Terms] OR "tuberculosis"[All Fields]',
    "xdr tb": '"extensively drug-resistant tuberculosis"[MeSH Terms] OR "xdr tb"[All Fields]',
    "diagnosis": '"diagnosis"[MeSH Terms] OR "diagnosis"[All Fields]',
    "rapid test": '"point-of-care testing"[MeSH Terms] OR ("rapid"[All Fields] AND "test"[All Fields])',
    "sputum smear": '("sputum"[MeSH Terms] OR "sputum"[All Fields]) AND "smear"[All Fields]',
    "glaucoma": '"glaucoma"[MeSH Terms] OR "glaucoma"[All Fields]',
    "intraocular pressure": '"intraocular pressure"[MeSH Terms] OR ("intraocular"[All Fields] AND '
                            '"pressure"[All Fields]) OR "intraocular pressure"[All Fields]',
    "screening": '"mass screening"[MeSH Terms] OR ("mass"[All Fields] AND "screening"[All Fields]) OR '
                 '"screening"[All Fields]',
    "myocardial infarction": '"myocardial infarction"[MeSH Terms] OR ("myocardial"[All Fields] AND '
                             '"infarction"[All Fields]) OR "myocardial infarction"[All Fields]',
    "heart attack": '"myocardial infarction"[MeSH Terms] OR "heart attack"[All Fields]',
    "troponin": '"troponin"[MeSH Terms] OR "troponin"[All Fields] OR "troponin i"[MeSH Terms]',
    "biomarker": '"biomarkers"[MeSH Terms] OR "biomarker"[All Fields]',
}

METAMAP = {
    "tuberculosis": ["C0041296", "D014376"],
    "XDR TB": ["D055985"],
    "diagnosis": ["D003933"],
    "rapid test": ["D000072", "C9999999"],
    "sputum smear": ["D013183"],
    "glaucoma": ["D005901"],
    "intraocular pressure": ["D007429", "D009798"],
    "screening": ["D008403"],
    "myocardial infarction": ["D009203"],
    "heart attack": ["D009203"],
    "troponin": ["D014336"],
    "biomarker": ["D015415"],
    "eye": ["D005123"],
}


def vector(axes, rng, dim):
    v = [axes.get(i, 0.0) + rng.uniform(-0.03, 0.03) for i in range(dim)]
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def fmt(v):
    return " ".join(f"{x:.6f}" for x in v)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20230117)

    with open(OUT / "mesh.tsv", "w") as f:
        f.write("# version: MINI-2023\n")
        f.write("# uid\tname\tentry terms\ttree numbers\n")
        for uid, name, entries, trees in MESH:
            f.write(f"{uid}\t{name}\t{';'.join(entries)}\t{';'.join(trees)}\n")

    with open(OUT / "mesh_embeddings.tsv", "w") as f:
        f.write(f"{DIM}\n")
        for uid, *_ in MESH:
            f.write(f"{uid}\t{fmt(vector(MESH_AXES[uid], rng, DIM))}\n")

    with open(OUT / "keyword_embeddings.tsv", "w") as f:
        f.write(f"{DIM}\n")
        for kw, axes in KEYWORD_AXES.items():
            f.write(f"{kw.lower()}\t{fmt(vector(axes, rng, DIM))}\n")

    with open(OUT / "w2v.tsv", "w") as f:
        f.write("4\n")
        for tok, v in WORD_VECTORS.items():
            f.write(f"{tok}\t{' '.join(f'{x:g}' for x in v)}\n")

    with open(OUT / "topics.jsonl", "w") as f:
        for t in TOPICS:
            f.write(json.dumps(t) + "\n")

    with open(OUT / "dates.tsv", "w") as f:
        for row in DATES:
            f.write("\t".join(row) + "\n")

    with open(OUT / "qrels.txt", "w") as f:
        for topic in sorted(QRELS):
            docs = [(p, 1) for p in QRELS[topic]] + [(p, 0) for p in QREL_NEGATIVES[topic]]
            for pmid, rel in sorted(docs):
                f.write(f"{topic} 0 {pmid} {rel}\n")

    with open(OUT / "metamap.tsv", "w") as f:
        for text, ids in METAMAP.items():
            f.write(f"{text}\t{';'.join(ids)}\n")

    with open(OUT / "corpus.jsonl", "w") as f:
        for pmid, edat, text, mesh in CORPUS:
            f.write(json.dumps({"pmid": pmid, "edat": edat, "text": text, "mesh": mesh}) + "\n")
        for kw, translation in ATM.items():
            f.write(json.dumps({"atm": kw, "translation": translation}) + "\n")


if __name__ == "__main__":
    main()
