import { ApiClient } from './api.js';
import { TracerApp } from './app.js';

function requireEl<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient('');
  const { sessions } = await api.listSessions();
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get('session') ?? sessions[0];
  if (!sessionId) {
    requireEl('status').textContent = 'no sessions on the server';
    return;
  }
  const app = new TracerApp(api, sessionId, {
    canvas: requireEl<HTMLCanvasElement>('canvas'),
    status: requireEl('status'),
    readout: requireEl('readout'),
    residual: requireEl('residual'),
    fitPanel: requireEl('fit-panel'),
    featureSelect: requireEl<HTMLSelectElement>('feature'),
    unitSelect: requireEl<HTMLSelectElement>('unit'),
    harmonics: requireEl<HTMLInputElement>('harmonics'),
    calibrateButton: requireEl<HTMLButtonElement>('calibrate'),
    controlPointMode: requireEl<HTMLInputElement>('cp-mode'),
  });
  await app.start();
}

void boot();
