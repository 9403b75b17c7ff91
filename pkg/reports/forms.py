from __future__ import annotations

from fractions import Fraction

from django import forms
from django.conf import settings

from constructions.services import PRINTED_SCALE
from examen.services import EXAMEN_SCALE
from synthesis.services import parse_mixed

# The chain's numbers grow about fourfold in digits per step; past this the
# originator floors need more precision than any sensible ceiling allows.
MAX_DEPTH = 12
CONSTRUCTION_CHOICES = [
    ("kochanski", "Kochanski"),
    ("bisection", "Bisection"),
]


def _errors_text(form: forms.Form) -> str:
    parts = []
    for name, errors in form.errors.items():
        label = "--" + name.replace("_", "-") if name != "__all__" else "input"
        parts.append(f"{label}: {' '.join(errors)}")
    return "; ".join(parts)


class CommandForm(forms.Form):
    def errors_text(self) -> str:
        return _errors_text(self)


class PiForm(CommandForm):
    digits = forms.IntegerField(min_value=1)
    compare = forms.CharField(required=False)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.fields["digits"] = forms.IntegerField(min_value=1, max_value=settings.CYCLOMETRIA_MAX_DIGITS - 1)

    def clean_compare(self) -> Fraction | None:
        raw = (self.cleaned_data.get("compare") or "").strip()
        if not raw:
            return None
        try:
            if "/" in raw and " " not in raw:
                num, den = raw.split("/", 1)
                if int(den) == 0:
                    raise forms.ValidationError("Denominator must be nonzero.")
                return Fraction(int(num), int(den))
            return parse_mixed(raw)
        except ValueError as exc:
            raise forms.ValidationError(f"Expected P/Q, got {raw!r}.") from exc


class ChainForm(CommandForm):
    depth = forms.IntegerField(min_value=0, max_value=MAX_DEPTH)


class ExamenForm(CommandForm):
    depth = forms.IntegerField(min_value=0, max_value=MAX_DEPTH)
    scale = forms.IntegerField(min_value=1)

    def clean(self):
        cleaned = super().clean()
        scale = cleaned.get("scale")
        if scale is not None and scale < EXAMEN_SCALE:
            self.add_error("scale", f"Table 2 needs at least {EXAMEN_SCALE} digits.")
        return cleaned


class ConstructForm(CommandForm):
    which = forms.ChoiceField(choices=CONSTRUCTION_CHOICES)
    scale = forms.IntegerField(min_value=1)
    year = forms.IntegerField(min_value=1, required=False)

    def clean(self):
        cleaned = super().clean()
        which, scale = cleaned.get("which"), cleaned.get("scale")
        minimum = PRINTED_SCALE if which == "kochanski" else 9
        if scale is not None and scale < minimum:
            self.add_error("scale", f"The {which} construction needs at least {minimum} digits.")
        if which == "bisection" and cleaned.get("year") is not None:
            self.add_error("year", "Only the kochanski construction has a year bound.")
        return cleaned


class CfForm(CommandForm):
    depth = forms.IntegerField(min_value=0, max_value=MAX_DEPTH)
