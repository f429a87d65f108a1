from src.common.exceptions import BudgetExceeded
from src.core.logger import logger
from src.database.models import BracketRecord, BracketStatus
from src.database.repositories import BracketRepository
from src.mane import estimate_c
from src.services.base import RunContext, Service


class ManeService(Service[BracketRepository]):

    def __init__(self, repository: BracketRepository) -> None:
        super().__init__(repository)

    def estimate(self, context: RunContext) -> BracketRecord:
        """Bracket c (or c_u) and store it; an exhausted budget stores the best bracket so far."""
        params = context.config.mane
        status = BracketStatus.CONVERGED
        try:
            bracket = estimate_c(
                context.system,
                tol=params.tol,
                contractible=params.contractible,
                x_window=params.x_window,
                grid=params.grid,
                max_steps=params.max_steps,
                descend=params.descend,
            )
        except BudgetExceeded as exc:
            if exc.best is None:
                raise
            logger.warning("%s: %s", context.system.name, exc)
            bracket, status = exc.best, BracketStatus.BUDGET
        if bracket.asymmetric:
            logger.warning("%s depends on y: the c bracket is heuristic", context.system.name)
        record = BracketRecord(
            system=context.system.name,
            system_hash=context.system.identity_hash,
            bracket=bracket,
            status=status,
        )
        return self._repo.add(record)
