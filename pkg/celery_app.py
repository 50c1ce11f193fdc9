from celery import Celery

from src.config.settings import get_settings

settings = get_settings()

celery_app = Celery(
    "ddsynth",
    broker=settings.celery_broker_url,
    backend=settings.celery_result_backend,
    include=[
        "src.tasks.bench",
    ],
)

# With the in-memory broker there is no worker; tasks run in the caller
celery_app.conf.update(
    task_always_eager=settings.tasks_eager,
    task_eager_propagates=True,
    result_serializer="json",
    task_serializer="json",
    accept_content=["json"],
)
