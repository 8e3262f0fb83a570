from django.db import models


class ExperimentRun(models.Model):
    """Record of one management-command run and its acceptance checks"""
    command = models.CharField(max_length=50)
    mode = models.CharField(max_length=20, blank=True)
    config = models.JSONField(default=dict)
    master_seed = models.BigIntegerField(default=0)
    threads = models.PositiveIntegerField(default=1)
    tool_version = models.CharField(max_length=20)
    wall_time = models.FloatField(help_text='Seconds')
    passed = models.BooleanField(default=False)
    checks = models.JSONField(default=list, blank=True)
    output_dir = models.CharField(max_length=500)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        outcome = 'passed' if self.passed else 'failed'
        return f"{self.command} (seed {self.master_seed}) {outcome}"

    @property
    def check_count(self):
        return len(self.checks or [])

    @property
    def failed_checks(self):
        return [check['name'] for check in self.checks or [] if not check.get('passed')]
