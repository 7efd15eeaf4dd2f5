from typing import Any, Dict, List

from dagster import AssetSelection, define_asset_job


class JobFactory:
    def create_jobs(self, jobs_config: List[Dict[str, Any]]):
        """
        One asset job per entry: ``{"name": ..., "group": ...}`` selects a whole
        scenario group, ``{"name": ..., "selection": [...]}`` explicit assets.
        """
        jobs = []
        for job_conf in jobs_config:
            name = job_conf["name"]
            selection = job_conf.get("selection")

            if isinstance(selection, list) and selection:
                asset_sel = AssetSelection.assets(*selection)
            elif "group" in job_conf:
                asset_sel = AssetSelection.groups(job_conf["group"])
            else:
                asset_sel = AssetSelection.all()

            jobs.append(
                define_asset_job(
                    name=name,
                    selection=asset_sel,
                    description=job_conf.get("description"),
                    tags=job_conf.get("tags"),
                )
            )
        return jobs
