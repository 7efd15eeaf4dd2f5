import hashlib
import json

from pydantic import BaseModel, ConfigDict


class BaseConfigModel(BaseModel):
    """
    Base Pydantic model for scenario and stage configuration.

    Adds the summary/hash helpers used by stage logging and run manifests.
    """

    model_config = ConfigDict(
        extra="forbid",
        populate_by_name=True,
        use_enum_values=False,
        frozen=False,
    )

    def to_summary_dict(self) -> dict:
        """Scalar fields only, for one-line stage logs; nested sections and lists are left out."""
        return {k: v for k, v in self.model_dump(mode="json").items() if not isinstance(v, (dict, list))}

    def canonical_json(self) -> str:
        """Stable JSON used for hashing: sorted keys, no whitespace."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
