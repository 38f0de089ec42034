import { evaluateExpression } from './calc.js';
import { widgetValue, type Snapshot } from './model.js';

export interface PageRefs {
  form: HTMLFormElement;
  promptInput: HTMLInputElement;
  banner: HTMLElement;
  panels: HTMLElement;
  footer: HTMLElement;
}

export function buildSkeleton(root: HTMLElement): PageRefs {
  root.innerHTML = `
    <header>
      <h1>Prompt Console</h1>
      <form id="prompt-form">
        <input id="prompt-input" type="text" autocomplete="off"
               placeholder="Tell the apps what to do..." />
        <button type="submit">Send</button>
      </form>
      <p id="banner" class="banner" hidden></p>
    </header>
    <main id="panels"></main>
    <footer id="debug-footer" class="footer"></footer>
  `;
  return {
    form: root.querySelector('#prompt-form') as HTMLFormElement,
    promptInput: root.querySelector('#prompt-input') as HTMLInputElement,
    banner: root.querySelector('#banner') as HTMLElement,
    panels: root.querySelector('#panels') as HTMLElement,
    footer: root.querySelector('#debug-footer') as HTMLElement,
  };
}

function ensurePanels(refs: PageRefs, snap: Snapshot): void {
  if (snap.manifest === null || refs.panels.childElementCount > 0) return;
  for (const app of snap.manifest.apps) {
    const panel = document.createElement('section');
    panel.className = 'panel';
    panel.dataset.app = app.name;
    const title = document.createElement('h2');
    title.textContent = app.name;
    const blurb = document.createElement('p');
    blurb.className = 'blurb';
    blurb.textContent = app.description;
    panel.append(title, blurb);
    for (const param of app.parameters) {
      const row = document.createElement('label');
      row.className = 'widget';
      row.dataset.param = param.name;
      const caption = document.createElement('span');
      caption.textContent = param.name;
      const input = document.createElement('input');
      input.type = 'text';
      input.readOnly = true; // values arrive from the state stream only
      input.placeholder = param.prompt;
      row.append(caption, input);
      if (param.extractor === 'arithmetic') {
        const result = document.createElement('output');
        result.className = 'result';
        row.append(result);
      }
      panel.append(row);
    }
    refs.panels.append(panel);
  }
}

export function render(refs: PageRefs, snap: Snapshot): void {
  ensurePanels(refs, snap);

  refs.banner.hidden = snap.banner === null;
  refs.banner.textContent = snap.banner ?? '';

  const currentApp = snap.state?.current_app ?? null;
  for (const panel of Array.from(refs.panels.children) as HTMLElement[]) {
    const appName = panel.dataset.app!;
    panel.classList.toggle('active', appName === currentApp);
    for (const row of Array.from(panel.querySelectorAll('.widget')) as HTMLElement[]) {
      const paramName = row.dataset.param!;
      const input = row.querySelector('input') as HTMLInputElement;
      const value = widgetValue(snap.state, appName, paramName);
      input.value = value;
      const result = row.querySelector('.result') as HTMLOutputElement | null;
      if (result !== null) {
        const evaluated = value ? evaluateExpression(value) : null;
        result.textContent = evaluated === null ? '' : `= ${evaluated}`;
      }
    }
  }

  const version = snap.state?.version ?? 0;
  const classified = snap.lastClassification;
  const pieces = [`session v${version}`, snap.status];
  if (classified !== null) {
    pieces.push(
      `last: ${classified.app} (${classified.score.toFixed(2)}` +
        `${classified.confident ? '' : ', low confidence'})`,
    );
  }
  if (snap.lastLatencyMs !== null) {
    pieces.push(`${snap.lastLatencyMs.toFixed(1)} ms`);
  }
  refs.footer.textContent = pieces.join(' | ');
}
