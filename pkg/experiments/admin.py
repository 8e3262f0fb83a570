from django.contrib import admin

from .models import ExperimentRun


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ['command', 'mode', 'master_seed', 'passed', 'check_count', 'wall_time', 'created_at']
    list_filter = ['command', 'passed', 'created_at']
    search_fields = ['command', 'output_dir']
    readonly_fields = ['created_at', 'check_count', 'failed_checks']

    fieldsets = (
        (None, {
            'fields': ('command', 'mode', 'master_seed', 'threads', 'passed')
        }),
        ('Configuration', {
            'fields': ('config', 'tool_version', 'output_dir'),
        }),
        ('Checks', {
            'fields': ('checks', 'check_count', 'failed_checks'),
            'classes': ('collapse',)
        }),
        ('Timing', {
            'fields': ('wall_time', 'created_at'),
            'classes': ('collapse',)
        }),
    )
