import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from src.cover_curve import CensusResult, CoverCurve, FixReport
from src.decomposer import DecompositionResult
from src.kani_rosen import AutGroup
from src.torsion_group import format_points

logger = logging.getLogger(__name__)


@dataclass
class ReportDocument:
    """Everything the CLI prints for one run, in JSON-ready form."""

    input: Dict
    normalized_basis: Dict[str, str] = field(default_factory=dict)
    fix_counts: List[Dict] = field(default_factory=list)
    partitions: List[List[str]] = field(default_factory=list)
    relations: List[str] = field(default_factory=list)
    decomposition: Dict = field(default_factory=dict)
    assumptions: List[str] = field(default_factory=list)
    census: Optional[Dict] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls(**json.loads(text))


def build_curve_document(
    curve: CoverCurve,
    fix_reports: List[FixReport],
    result: DecompositionResult,
    aut: AutGroup,
    generators_text: Optional[str] = None,
) -> ReportDocument:
    """
    Collect an analysis run into a report document.

    Args:
        curve (CoverCurve): The analysed cover curve
        fix_reports (List[FixReport]): Fixed-point report for every x in X
        result (DecompositionResult): Output of the decomposer
        aut (AutGroup): Automorphism group used for partition labels
        generators_text (Optional[str]): Generators of X as the user typed them

    Returns:
        ReportDocument: Serializable document
    """
    d = curve.d
    fix_counts = [
        {
            "x": "{},{}".format(*r.x.coordinates(d)),
            "count": r.count,
            "branch": r.branch.name,
            "parity": r.parity.value if r.parity else None,
        }
        for r in fix_reports
    ]
    return ReportDocument(
        input={
            "d": d,
            "generators": generators_text or format_points(d, curve.subgroup.canonical_generators()),
            "subgroup": curve.label,
        },
        normalized_basis={"k1": str(curve.context.k1), "k2": str(curve.context.k2)},
        fix_counts=fix_counts,
        partitions=[[aut.describe(h) for h in p.parts] for p in result.partitions],
        relations=[str(r.cancelled()) for r in result.relations],
        decomposition={
            "genus": result.genus,
            "expression": str(result.expression),
            "expression_resolved": result.expression_resolved,
            "split": str(result.split),
            "verdict": result.verdict.value,
            "quotients": {str(f): str(e) for f, e in result.quotients.items()},
        },
        assumptions=list(result.assumptions),
    )


def build_census_document(census: CensusResult) -> ReportDocument:
    return ReportDocument(
        input={"d": census.d, "command": "census"},
        census={
            "d": census.d,
            "total": census.total,
            "terms": [
                {"label": t.label, "translations": t.translations, "source": t.source}
                for t in census.terms
            ],
            "trace": list(census.trace),
        },
    )


class ReportGenerator:
    """Renders report documents as text or JSON."""

    def generate_outputs(self, document: ReportDocument, formats: List[str]) -> Dict[str, bytes]:
        """
        Render the document in each requested format.

        Args:
            document (ReportDocument): Report to render
            formats (List[str]): Any of "text", "json"

        Returns:
            Dict[str, bytes]: Format name mapped to encoded output
        """
        outputs = {}
        try:
            for format_name in formats:
                if format_name == "json":
                    outputs["json"] = document.to_json().encode("utf-8")
                elif format_name == "text":
                    outputs["text"] = self._generate_text(document).encode("utf-8")
                else:
                    raise ValueError(f"unknown output format {format_name!r}")
            return outputs
        except Exception:
            logger.exception("error generating outputs")
            raise

    def _generate_text(self, document: ReportDocument) -> str:
        sections = [f"Input: {document.input}"]
        if document.normalized_basis:
            sections.append(
                f"Normalized basis: k1={document.normalized_basis['k1']} k2={document.normalized_basis['k2']}"
            )
        if document.fix_counts:
            table = pd.DataFrame(document.fix_counts).fillna("-")
            sections.append("Fixed points of [-1] o t_x:\n" + table.to_string(index=False))
        if document.partitions:
            lines = [f"  {i + 1}. " + " | ".join(parts) for i, parts in enumerate(document.partitions)]
            sections.append("Partitions of G:\n" + "\n".join(lines))
        if document.relations:
            sections.append("Relations:\n" + "\n".join(f"  {r}" for r in document.relations))
        if document.decomposition:
            dec = document.decomposition
            body = [
                f"  genus:      {dec['genus']}",
                self._expression_line(dec),
                f"  split:      J(C) ~ {dec['split']}",
                f"  verdict:    {dec['verdict']}",
            ]
            body.extend(f"  {name} ~ {expr}" for name, expr in dec.get("quotients", {}).items())
            sections.append("Decomposition:\n" + "\n".join(body))
        if document.assumptions:
            sections.append("Assumptions:\n" + "\n".join(f"  - {a}" for a in document.assumptions))
        if document.census:
            census = document.census
            table = pd.DataFrame(census["terms"]) if census["terms"] else pd.DataFrame()
            text = f"Hyperelliptic census d={census['d']}: total {census['total']}"
            if not table.empty:
                text += "\n" + table.to_string(index=False)
            text += "\n" + "\n".join(f"  {line}" for line in census["trace"])
            sections.append(text)
        return "\n\n".join(sections)

    @staticmethod
    def _expression_line(decomposition: Dict) -> str:
        if decomposition.get("expression_resolved", True):
            return f"  expression: J(C) ~ {decomposition['expression']}"
        return "  expression: not resolved by the relations of G and G/T (see split)"
